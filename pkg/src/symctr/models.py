"""Built-in central operators, generator families and claim verifiers.

Each model ships its central operator together with the known first-order
generators, all re-verified to commute at construction time.  The
verifiers compute both sides of a claimed identity and report the exact
residual; a nonzero residual is reported, never silently corrected.

Reference generator tables that circulate for these operators are kept
here as plain expressions so they can be re-checked entry by entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .coeffring import Coefficient, GaussianRational, I, ONE, ZERO
from .errors import DimensionMismatch
from .exprio import parse_operator
from .liealg import AbstractAlgebra
from .opalg import DiffOperator, OperatorBasis, commutator
from .solver import default_spec, span_membership

_HALF = GaussianRational(Fraction(1, 2))


@dataclass(frozen=True)
class ModelSpec:
    """A central operator with its variables and known generators."""

    name: str
    dim: int
    var_names: tuple
    central: DiffOperator
    generators: OperatorBasis
    parameters: dict = field(default_factory=dict)
    time_index: int = 0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.var_names) != self.dim:
            raise DimensionMismatch("variable names do not match dim")
        if self.central.dim != self.dim or self.generators.dim != self.dim:
            raise DimensionMismatch("operators do not match model dim")
        for k, g in enumerate(self.generators):
            if not commutator(self.central, g).is_zero:
                raise ValueError(
                    f"generator {k} does not commute with the central operator"
                )

    def ansatz_spec(self, order: int):
        return default_spec(order, self.dim, self.time_index)


def model_schrodinger1d() -> ModelSpec:
    """Free one-dimensional evolution operator ``dxx - i dt``.

    Generators: boost ``-2i t dx + x``, space translation ``-i dx``, time
    translation ``i dt``, identity.
    """
    dim = 2
    x = Coefficient.variable(dim, 0)
    t = Coefficient.variable(dim, 1)
    central = DiffOperator(
        dim, {(2, 0): Coefficient.one(dim), (0, 1): Coefficient.scalar(dim, -I)}
    )
    boost = DiffOperator(dim, {(1, 0): t * GaussianRational(0, -2), (0, 0): x})
    space = DiffOperator(dim, {(1, 0): Coefficient.scalar(dim, -I)})
    time = DiffOperator(dim, {(0, 1): Coefficient.scalar(dim, I)})
    return ModelSpec(
        name="schrodinger1d",
        dim=dim,
        var_names=("x", "t"),
        central=central,
        generators=OperatorBasis((boost, space, time, DiffOperator.identity(dim))),
        time_index=1,
    )


_KG_NAMES = ("t", "x", "y", "z")


def kg_variable_names(dim: int) -> tuple:
    if dim <= 4:
        return _KG_NAMES[:dim]
    return ("t",) + tuple(f"x{k}" for k in range(1, dim))


def _box_operator(dim: int, signature: tuple) -> DiffOperator:
    terms = {}
    for mu, s in enumerate(signature):
        alpha = tuple(2 if v == mu else 0 for v in range(dim))
        terms[alpha] = Coefficient.scalar(dim, s)
    return DiffOperator(dim, terms)


def _lorentz_generator(dim: int, signature: tuple, mu: int, nu: int) -> DiffOperator:
    x_mu = Coefficient.variable(dim, mu) * signature[mu]
    x_nu = Coefficient.variable(dim, nu) * signature[nu]
    d_mu = tuple(1 if v == mu else 0 for v in range(dim))
    d_nu = tuple(1 if v == nu else 0 for v in range(dim))
    return DiffOperator(dim, {d_nu: x_mu * I, d_mu: x_nu * (-I)})


def model_klein_gordon(spatial_dim: int = 3, signature: Optional[Sequence] = None) -> ModelSpec:
    """Flat wave operator with the full set of first-order symmetries.

    Generators: the ``d+1`` translations, the ``(d+1)d/2`` index-lowered
    rotation/boost generators ``i(x_u dv - x_v du)``, and the identity --
    ``1 + (d+1) + (d+1)d/2`` members in total.  Metric signature defaults
    to ``(+, -, -, ...)`` with the time-like variable first; the choice is
    recorded in the model metadata.
    """
    if spatial_dim < 1:
        raise ValueError("need at least one spatial dimension")
    dim = spatial_dim + 1
    if signature is None:
        signature = (1,) + (-1,) * spatial_dim
    signature = tuple(
        s if isinstance(s, GaussianRational) else GaussianRational(s)
        for s in signature
    )
    if len(signature) != dim or any(s * s != ONE for s in signature):
        raise ValueError("signature must assign +1 or -1 per variable")
    central = _box_operator(dim, signature)
    gens = [DiffOperator.derivative(dim, mu) for mu in range(dim)]
    for mu in range(dim):
        for nu in range(mu + 1, dim):
            gens.append(_lorentz_generator(dim, signature, mu, nu))
    gens.append(DiffOperator.identity(dim))
    return ModelSpec(
        name="kg",
        dim=dim,
        var_names=kg_variable_names(dim),
        central=central,
        generators=OperatorBasis(tuple(gens)),
        time_index=0,
        metadata={"signature": tuple(str(s) for s in signature)},
    )


def model_klein_gordon4(
    spatial_dim: int = 3,
    mass_scale: GaussianRational = ONE,
    signature: Optional[Sequence] = None,
) -> ModelSpec:
    """Quartic extension ``a^-2 + box + (a^2/2) box^2`` of the wave operator.

    The extension is a polynomial in the wave operator, so anything
    commuting with the box commutes with it; the same generator family is
    attached and re-verified against the full operator.
    """
    base = model_klein_gordon(spatial_dim, signature)
    a = mass_scale
    if a.is_zero:
        raise ValueError("mass scale must be nonzero")
    box = base.central
    central = (
        DiffOperator.identity(base.dim).scale(ONE / (a * a))
        + box
        + (box * box).scale(a * a * _HALF)
    )
    return ModelSpec(
        name="kg4th",
        dim=base.dim,
        var_names=base.var_names,
        central=central,
        generators=base.generators,
        parameters={"mass_scale": a},
        time_index=0,
        metadata=dict(base.metadata, extension="quartic"),
    )


MODEL_BUILDERS = {
    "schrodinger1d": model_schrodinger1d,
    "kg": model_klein_gordon,
    "kg4th": model_klein_gordon4,
}


# ---------------------------------------------------------------------------
# Alpha-parametrized deformed generators
# ---------------------------------------------------------------------------


class AlphaMatrix:
    """A zero-diagonal square parameter matrix for deformed generators.

    ``entries[v][mu]`` are exact scalars; ``row_sum(a)`` is the contracted
    parameter ``sum_mu entries[a][mu]``.  An optional companion vector may
    be attached; ``constraint_holds`` checks that the contracted row sums
    annihilate it.
    """

    __slots__ = ("size", "entries", "companion")

    def __init__(self, entries, companion: Optional[Sequence] = None):
        rows = tuple(
            tuple(
                v if isinstance(v, GaussianRational) else GaussianRational(v)
                for v in row
            )
            for row in entries
        )
        n = len(rows)
        if n < 2 or any(len(row) != n for row in rows):
            raise ValueError("alpha matrix must be square, size >= 2")
        if any(not rows[k][k].is_zero for k in range(n)):
            raise ValueError("alpha matrix must have zero diagonal")
        object.__setattr__(self, "size", n)
        object.__setattr__(self, "entries", rows)
        if companion is not None:
            companion = tuple(
                v if isinstance(v, GaussianRational) else GaussianRational(v)
                for v in companion
            )
            if len(companion) != n:
                raise ValueError("companion vector length must match size")
        object.__setattr__(self, "companion", companion)

    def __setattr__(self, name, value):
        raise AttributeError("AlphaMatrix is immutable")

    def row_sum(self, a: int) -> GaussianRational:
        total = ZERO
        for v in self.entries[a]:
            total = total + v
        return total

    def linear_form(self, a: int) -> Coefficient:
        """The coefficient function ``sum_mu entries[a][mu] x^mu``."""
        total = Coefficient.zero(self.size)
        for mu, v in enumerate(self.entries[a]):
            if not v.is_zero:
                total = total + Coefficient.variable(self.size, mu) * v
        return total

    def constraint_holds(self) -> bool:
        if self.companion is None:
            raise ValueError("no companion vector attached")
        total = ZERO
        for a, c in enumerate(self.companion):
            total = total + self.row_sum(a) * c
        return total.is_zero

    @classmethod
    def ones(cls, size: int = 4) -> "AlphaMatrix":
        return cls(
            [[0 if r == c else 1 for c in range(size)] for r in range(size)]
        )


def _partial(dim: int, v: int) -> DiffOperator:
    return DiffOperator.derivative(dim, v)


def translation_generator(alpha: AlphaMatrix, mu: int) -> DiffOperator:
    """Momentum-convention translation ``-i d_mu``."""
    return _partial(alpha.size, mu).scale(-I)


def build_deformed_generator(alpha: AlphaMatrix, n: int, m: int) -> DiffOperator:
    """``row_sum(n) * f_m * d_m - row_sum(m) * f_n * d_n``.

    Antisymmetric in ``(n, m)`` by construction; equal indices give the
    zero operator (documented, not an error).
    """
    dim = alpha.size
    if not (0 <= n < dim and 0 <= m < dim):
        raise ValueError("generator indices out of range")
    if n == m:
        return DiffOperator.zero(dim)
    first = _partial(dim, m).scale(alpha.linear_form(m)).scale(alpha.row_sum(n))
    second = _partial(dim, n).scale(alpha.linear_form(n)).scale(alpha.row_sum(m))
    return first - second


def mixed_generator(alpha: AlphaMatrix, a: int, b: int, c: int) -> DiffOperator:
    """Auxiliary family ``entries[c][a] row_sum(b) d_c - entries[b][a] row_sum(c) d_b``."""
    dim = alpha.size
    first = _partial(dim, c).scale(alpha.entries[c][a] * alpha.row_sum(b))
    second = _partial(dim, b).scale(alpha.entries[b][a] * alpha.row_sum(c))
    return first - second


def lorentz_like(dim: int, u: int, v: int) -> DiffOperator:
    """Upper-index rotation form ``i(x^u dv - x^v du)`` (no metric)."""
    xu = Coefficient.variable(dim, u)
    xv = Coefficient.variable(dim, v)
    return (_partial(dim, v).scale(xu) - _partial(dim, u).scale(xv)).scale(I)


@dataclass(frozen=True)
class CheckItem:
    """One verified identity: both sides and the exact residual."""

    label: str
    lhs: DiffOperator
    rhs: DiffOperator

    @property
    def residual(self) -> DiffOperator:
        return self.lhs - self.rhs

    @property
    def exact(self) -> bool:
        return self.residual.is_zero


@dataclass(frozen=True)
class DeformedBracketReport:
    """Identity residuals plus informational (not asserted) computations."""

    items: tuple
    informational: tuple

    @property
    def all_exact(self) -> bool:
        return all(item.exact for item in self.items)


def check_deformed_brackets(alpha: AlphaMatrix, signature: Optional[Sequence] = None) -> DeformedBracketReport:
    """Exact residuals for the deformed bracket identities.

    Verified identities: vanishing translation brackets, the deformed
    rotation/translation bracket, the full rotation/rotation bracket
    through the auxiliary family, annihilation on repeated indices,
    antisymmetry, the translation representation and the contracted sum.
    The wave-operator commutators of the deformed generators are computed
    and attached as informational items only.
    """
    dim = alpha.size
    if signature is None:
        signature = (1,) + (-1,) * (dim - 1)
    translations = [translation_generator(alpha, mu) for mu in range(dim)]
    rotations = {
        (n, m): build_deformed_generator(alpha, n, m)
        for n in range(dim)
        for m in range(dim)
    }
    zero = DiffOperator.zero(dim)
    items = []
    for mu in range(dim):
        for nu in range(mu + 1, dim):
            items.append(
                CheckItem(
                    f"[P{mu},P{nu}] = 0",
                    commutator(translations[mu], translations[nu]),
                    zero,
                )
            )
    for mu in range(dim):
        for nu in range(mu + 1, dim):
            for n in range(dim):
                lhs = commutator(rotations[(mu, nu)], translations[n])
                rhs = translations[mu].scale(
                    alpha.row_sum(nu) * alpha.entries[mu][n]
                ) - translations[nu].scale(alpha.row_sum(mu) * alpha.entries[nu][n])
                items.append(CheckItem(f"[O{mu}{nu},P{n}]", lhs, rhs))
    for a in range(dim):
        for u in range(a + 1, dim):
            for b in range(dim):
                for v in range(b + 1, dim):
                    lhs = commutator(rotations[(a, u)], rotations[(b, v)])
                    rhs = (
                        mixed_generator(alpha, u, b, v)
                        .scale(alpha.linear_form(u))
                        .scale(alpha.row_sum(a))
                        + mixed_generator(alpha, a, v, b)
                        .scale(alpha.linear_form(a))
                        .scale(alpha.row_sum(u))
                        + mixed_generator(alpha, v, u, a)
                        .scale(alpha.linear_form(v))
                        .scale(alpha.row_sum(b))
                        + mixed_generator(alpha, b, a, u)
                        .scale(alpha.linear_form(b))
                        .scale(alpha.row_sum(v))
                    )
                    items.append(CheckItem(f"[O{a}{u},O{b}{v}]", lhs, rhs))
    for a in range(dim):
        for b in range(dim):
            items.append(
                CheckItem(f"M{a}{b}{b} = 0", mixed_generator(alpha, a, b, b), zero)
            )
    for a in range(dim):
        for b in range(dim):
            for c in range(b + 1, dim):
                items.append(
                    CheckItem(
                        f"M{a}{b}{c} + M{a}{c}{b} = 0",
                        mixed_generator(alpha, a, b, c)
                        + mixed_generator(alpha, a, c, b),
                        zero,
                    )
                )
    for n in range(dim):
        for m in range(n + 1, dim):
            items.append(
                CheckItem(
                    f"O{n}{m} + O{m}{n} = 0",
                    rotations[(n, m)] + rotations[(m, n)],
                    zero,
                )
            )
    for a in range(dim):
        for b in range(dim):
            if a == b:
                continue
            rhs = _partial(dim, b).scale(-(alpha.entries[b][a] * alpha.row_sum(a)))
            items.append(
                CheckItem(f"M{a}{b}{a}", mixed_generator(alpha, a, b, a), rhs)
            )
    for v in range(dim):
        for u in range(dim):
            lhs = zero
            mid = zero
            last = zero
            for a in range(dim):
                lhs = lhs + mixed_generator(alpha, a, v, u).scale(alpha.row_sum(a))
                mid = mid + mixed_generator(alpha, a, v, a)
                last = last + mixed_generator(alpha, a, a, u)
            rhs = mid.scale(alpha.row_sum(u)) + last.scale(alpha.row_sum(v))
            items.append(CheckItem(f"contraction v={v} u={u}", lhs, rhs))
    informational = []
    box = _box_operator(dim, tuple(GaussianRational(s) for s in signature))
    for n in range(dim):
        for m in range(n + 1, dim):
            informational.append(
                CheckItem(
                    f"[box,O{n}{m}] (not asserted)",
                    commutator(box, rotations[(n, m)]),
                    zero,
                )
            )
            informational.append(
                CheckItem(
                    f"O{n}{m} - lorentz (deformation correction)",
                    rotations[(n, m)] - lorentz_like(dim, n, m),
                    zero,
                )
            )
    return DeformedBracketReport(tuple(items), tuple(informational))


def deformed_vs_lorentz(alpha: AlphaMatrix, u: int, v: int):
    """Deformed generator, the plain rotation form, and their difference."""
    deformed = build_deformed_generator(alpha, u, v)
    plain = lorentz_like(alpha.size, u, v)
    return deformed, plain, deformed - plain


# ---------------------------------------------------------------------------
# Perturbation verifiers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PerturbationReport:
    """An exact comparison ``lhs`` versus ``rhs`` with residual attached."""

    label: str
    lhs: DiffOperator
    rhs: DiffOperator
    residual: DiffOperator
    exact: bool

    @classmethod
    def compare(cls, label: str, lhs: DiffOperator, rhs: DiffOperator) -> "PerturbationReport":
        residual = lhs - rhs
        return cls(label, lhs, rhs, residual, residual.is_zero)


def dilation_generator(dim: int) -> DiffOperator:
    """The scaling generator ``sum_mu x^mu d_mu``."""
    total = DiffOperator.zero(dim)
    for mu in range(dim):
        total = total + _partial(dim, mu).scale(Coefficient.variable(dim, mu))
    return total


def verify_dilation_tower(n_max: int, spatial_dim: int = 3, signature: Optional[Sequence] = None) -> list:
    """Compare ``[box^n, dilation]`` against ``(2 box)^n`` for each n.

    The bracket itself always equals ``2n box^n`` (checked internally); the
    claimed identity against ``(2 box)^n`` is exact only for n = 1, 2 and
    the nonzero residual is reported beyond that.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    dim = spatial_dim + 1
    if signature is None:
        signature = (1,) + (-1,) * spatial_dim
    box = _box_operator(dim, tuple(GaussianRational(s) for s in signature))
    dila = dilation_generator(dim)
    reports = []
    box_n = box
    for n in range(1, n_max + 1):
        lhs = commutator(box_n, dila)
        if lhs != box_n.scale(GaussianRational(2 * n)):
            raise ArithmeticError("internal error: bracket is not 2n box^n")
        rhs = box_n.scale(GaussianRational(2**n))
        reports.append(PerturbationReport.compare(f"n={n}", lhs, rhs))
        box_n = box_n * box
    return reports


@dataclass(frozen=True)
class HarmonicPerturbationReport:
    """Residual report for the exponentially deformed first-order operator."""

    bracket: PerturbationReport
    potential_bracket: Optional[DiffOperator]
    decomposition: Optional[tuple]
    candidates: tuple
    var_names: tuple


def verify_harmonic_perturbation(
    c1: GaussianRational,
    coupling: GaussianRational,
    potential_strength: Optional[GaussianRational] = None,
) -> HarmonicPerturbationReport:
    """Check the claimed deformed bracket of ``exp(c1 x)(dx + K x / c1)``.

    Computes ``[dx, D]`` exactly, evaluates the claimed right-hand side
    ``(c1+1) D - exp(c1 x) dx``, and reports the residual verbatim (the
    claim is not asserted).  When a potential strength ``k`` is supplied,
    ``[box + k x^2, D]`` is also computed and an exact decomposition over
    a small candidate family is attempted.
    """
    if c1.is_zero:
        raise ValueError("c1 must be nonzero")
    dim = 2  # variables (t, x)
    var_names = ("t", "x")
    x = Coefficient.variable(dim, 1)
    lam = (ZERO, c1)
    exp_c1x = Coefficient.monomial(dim, (0, 0), ONE, lam)
    dx = _partial(dim, 1)
    deformed = dx.scale(exp_c1x) + DiffOperator(
        dim, {(0, 0): exp_c1x * x * (coupling / c1)}
    )
    lhs = commutator(dx, deformed)
    claimed = deformed.scale(c1 + ONE) - dx.scale(exp_c1x)
    bracket = PerturbationReport.compare("[dx, D] vs claim", lhs, claimed)
    potential_bracket = None
    decomposition = None
    candidates = (
        DiffOperator.identity(dim),
        deformed,
        dx.scale(exp_c1x),
        DiffOperator(dim, {(0, 0): exp_c1x}),
        DiffOperator(dim, {(0, 0): exp_c1x * x}),
        DiffOperator(dim, {(0, 0): exp_c1x * x * x}),
    )
    if potential_strength is not None:
        box = _box_operator(dim, (ONE, -ONE))
        potential = DiffOperator(dim, {(0, 0): x * x * potential_strength})
        potential_bracket = commutator(box + potential, deformed)
        coords = span_membership(list(candidates), potential_bracket)
        decomposition = tuple(coords) if coords is not None else None
    return HarmonicPerturbationReport(
        bracket=bracket,
        potential_bracket=potential_bracket,
        decomposition=decomposition,
        candidates=candidates,
        var_names=var_names,
    )


def clifford_condition_check(
    alg: AbstractAlgebra,
    generators: Optional[Sequence[int]] = None,
    metric: Optional[Sequence[Sequence]] = None,
    scale: GaussianRational = GaussianRational(-2),
) -> bool:
    """True iff the table is the metric shadow of a Clifford family.

    The symmetric part of each generator product must equal
    ``scale * metric[i][j]`` times the unit, and every other structure
    constant of generator products must vanish.  Defaults: all non-unit
    indices as generators, the identity metric, scale -2.
    """
    if alg.unit is None:
        raise ValueError("clifford check needs a unital algebra")
    if generators is None:
        generators = [k for k in range(alg.size) if k != alg.unit]
    generators = list(generators)
    if metric is None:
        metric = [
            [ONE if a == b else ZERO for b in range(len(generators))]
            for a in range(len(generators))
        ]
    for a, i in enumerate(generators):
        for b, j in enumerate(generators):
            want = scale * (
                metric[a][b]
                if isinstance(metric[a][b], GaussianRational)
                else GaussianRational(metric[a][b])
            )
            sym_unit = alg.mult[i][j][alg.unit] + alg.mult[j][i][alg.unit]
            if sym_unit != want * 2:
                return False
            for k in range(alg.size):
                if k == alg.unit:
                    continue
                if not alg.mult[i][j][k].is_zero:
                    return False
    return True


def gamma_shadow_algebra(signature: Sequence = (1, -1, -1, -1), scale: GaussianRational = GaussianRational(4)) -> AbstractAlgebra:
    """Structure-constant shadow of a scaled gamma-matrix family.

    Generator products close on ``scale * metric`` times the unit and all
    other constants vanish; the algebra is intentionally non-associative
    as a table (it is a shadow, not a faithful representation).
    """
    n = len(signature) + 1
    unit = n - 1
    mult = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        mult[unit][k][k] = ONE
        mult[k][unit][k] = ONE
    mult[unit][unit] = [ZERO] * n
    mult[unit][unit][unit] = ONE
    for a, s in enumerate(signature):
        for b in range(len(signature)):
            if a == b:
                mult[a][b][unit] = scale * GaussianRational(s)
    return AbstractAlgebra(mult, unit=unit)


# ---------------------------------------------------------------------------
# Reference tables (re-verified, never trusted)
# ---------------------------------------------------------------------------

_REFERENCE_ORDER2 = (
    ("2.1", "d[t,t]"),
    ("2.2", "-i*t^2*d[t,t] + t*x*d[x] + (i/2)*((x^2)/2 - (i/2)*t^-1)"),
    ("2.3", "-2*i*t*d[x,x] + x*d[x] - 1/16"),
    ("2.4", "-2*i*t*d[x] + x"),
    ("2.5", "-i*d[x]"),
    ("2.6", "1"),
    ("2.7", "-2*i*t*d[x,t] + x*d[t]"),
    ("2.8", "i*d[t]"),
    ("2.9", "2*d[x,t]"),
    ("2.10", "d[x,x]"),
)

_REFERENCE_ORDER3 = (
    (
        "3.1",
        "-2*i*(t^3)/3*d[x,x,x] - (t^2*x + i*(t^3)/3)*d[x,x]"
        " + (i/2)*(t*x + i*t^2*x - (t^3)/3 + i*t^2)*d[x]"
        " + (i/4)*(-i*(x^3)/3 + t*x^2 + i*t^2*x - (t^3)/3)",
    ),
    (
        "3.2",
        "-2*i*t^2*d[x,x,x] - (2*t*x + i*t^2)*d[x,x]"
        " + (i/2)*(x^2 + 2*i*t*x - t^2 + 2*i*t)*d[x] + (i/4)*(x + i*t)^2",
    ),
    ("3.3", "-4*i*t*d[x,x,x] - x*d[x,x] + i*d[x]"),
    ("3.4", "-4*i*d[x,x,x]"),
    ("3.5", "2*i*t*d[x,t,t] + x*d[x,x]"),
    ("3.6", "i*t^2*d[x,x,t] + t*x*d[x,t] - (i/4)*(x^2 + 2*i*t)*d[t]"),
    ("3.7", "2*i*t*d[x,x,t] + x*d[x,t]"),
    ("3.8", "-i*d[t,t,t]"),
    ("3.9", "-i*d[x,x,t]"),
    ("3.10", "i*d[x,t,t]"),
    ("3.11", "-2*i*t*d[x,x] - (x + i*t)*d[x] - (1/2)*(x + i*t)"),
    ("3.12", "-2*t*d[x,x] + i*d[x] + i/2"),
    ("3.13", "t*d[x,t] - (i/2)*x*d[t]"),
    ("3.14", "d[x,x]"),
    ("3.15", "d[t,t]"),
    ("3.16", "d[x,t]"),
    ("3.17", "2*i*t*d[x] - x"),
    ("3.18", "i*d[t]"),
    ("3.19", "-i*d[x]"),
    ("3.20", "1"),
)


def reference_expressions(order: int):
    """Previously tabulated basis entries for the 1d evolution operator.

    These are inputs to be re-verified, not trusted values.
    """
    if order == 2:
        return _REFERENCE_ORDER2
    if order == 3:
        return _REFERENCE_ORDER3
    raise ValueError("reference tables exist for orders 2 and 3 only")


def reference_basis(order: int):
    model = model_schrodinger1d()
    return [
        (label, parse_operator(text, model.var_names))
        for label, text in reference_expressions(order)
    ]


@dataclass(frozen=True)
class ReferenceEntryCheck:
    label: str
    operator: DiffOperator
    residual: DiffOperator
    commutes: bool
    in_span: bool


def cross_check_reference(order: int, computed_basis: Sequence[DiffOperator]) -> list:
    """Commutation and span-membership protocol for one reference table.

    Each entry is tested for exact commutation with the central operator
    and for membership in the supplied computed basis; nonzero residuals
    are reported, not corrected.
    """
    model = model_schrodinger1d()
    checks = []
    for label, op in reference_basis(order):
        residual = commutator(model.central, op)
        coords = span_membership(list(computed_basis), op)
        checks.append(
            ReferenceEntryCheck(
                label=label,
                operator=op,
                residual=residual,
                commutes=residual.is_zero,
                in_span=coords is not None,
            )
        )
    return checks
