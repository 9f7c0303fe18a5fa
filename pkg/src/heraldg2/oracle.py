"""Closed-form benchmark expressions for g2_C(tau, 0) at truncation orders 3..10.

The expressions are stored with their integer polynomial coefficients exactly
as printed in the source expressions (descending powers of alpha, scalar
prefactors kept separate, one record per exponential term).  Products such as
"6 * (11 a + 8)" are therefore represented as scalar=6, poly=[11, 8] and
multiplied out in code, never by hand.

Evaluation is performed after an algebraic rearrangement in z = exp(-x/2)
with x = sigma^2 tau^2: every exponential e^{c x} is rewritten as a power of
z by factoring the dominant exponential out of numerator and denominator.
This keeps the evaluation overflow-free for arbitrarily large x (e^x alone
overflows double precision near x ~ 709).

Only the order-3 expression exists for both projection branches (the AD
branch differs by a sign pattern that is only specified at order 3); orders
4..10 are DD only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import exp
from typing import Callable

from heraldg2.correlator import ProjectionBasis
from heraldg2.fock_core import UsageError


@dataclass(frozen=True)
class _Term:
    """scalar * alpha^alpha_power * poly(alpha) * exp(xcoeff * x)."""

    scalar: int
    poly: tuple[int, ...]  # descending powers of alpha, as printed
    xcoeff: Fraction
    alpha_power: int = 0

    def coefficient(self, alpha: float) -> float:
        acc = 0.0
        for c in self.poly:
            acc = acc * alpha + c
        return self.scalar * alpha**self.alpha_power * acc


@dataclass(frozen=True)
class _PrintedForm:
    """pref * num_poly(alpha) * e^{base x} * sum(num_terms) / (sum(den_terms))^2."""

    P: int
    pref: Fraction
    base_exponent: Fraction
    num_poly: tuple[int, ...]  # descending, as printed
    num_terms: tuple[_Term, ...]
    den_terms: tuple[_Term, ...]

    def __post_init__(self) -> None:
        # The rearrangement in z only eliminates all positive exponentials if
        # the total exponent balances; assert it once at construction.
        e_num = self.base_exponent + max(t.xcoeff for t in self.num_terms)
        e_den = max(t.xcoeff for t in self.den_terms)
        if e_num != 2 * e_den:
            raise UsageError(f"unbalanced exponents in closed form P={self.P}")

    def value(self, alpha: float, x: float) -> float:
        z = exp(-x / 2.0)
        e_den = max(t.xcoeff for t in self.den_terms)
        e_num = self.base_exponent + max(t.xcoeff for t in self.num_terms)
        num = 0.0
        for t in self.num_terms:
            zpow = 2 * (e_num - self.base_exponent - t.xcoeff)
            num += t.coefficient(alpha) * z ** float(zpow)
        den = 0.0
        for t in self.den_terms:
            zpow = 2 * (e_den - t.xcoeff)
            den += t.coefficient(alpha) * z ** float(zpow)
        poly = 0.0
        for c in self.num_poly:
            poly = poly * alpha + c
        return float(self.pref) * poly * num / (den * den)


F = Fraction

# Order 3, both branches (the only order printed with both signs):
#   g2 = -+ Q (2 e^{x/2} -+ 3 e^{x}) / (4 ((11a+8) e^{x/2} -+ 6a -+ 4)^2),
# upper signs: DD, lower signs: AD, Q = 129 a^2 + 176 a + 128.
def _p3(alpha: float, x: float, branch: ProjectionBasis) -> float:
    z = exp(-x / 2.0)
    q = (129 * alpha + 176) * alpha + 128
    if branch is ProjectionBasis.DD:
        # multiply num and den brackets by z^2 = e^{-x}
        return q * (3 - 2 * z) / (4 * ((11 * alpha + 8) - (6 * alpha + 4) * z) ** 2)
    return q * (3 + 2 * z) / (4 * ((11 * alpha + 8) + (6 * alpha + 4) * z) ** 2)


_FORMS: dict[int, _PrintedForm] = {
    4: _PrintedForm(
        P=4,
        pref=F(2, 9),
        base_exponent=F(-2),
        num_poly=(5047, 9288, 12672, 9216),
        num_terms=(
            _Term(1, (1,), F(1), alpha_power=1),
            _Term(-16, (3, 2), F(5, 2)),
            _Term(6, (11, 8), F(3)),
        ),
        den_terms=(
            _Term(1, (258, 352, 256), F(1, 2)),
            _Term(-1, (155, 192, 128), F(0)),
        ),
    ),
    5: _PrintedForm(
        P=5,
        pref=F(9, 128),
        base_exponent=F(-1),
        num_poly=(1221863, 2584064, 4755456, 6488064, 4718592),
        num_terms=(
            _Term(-2, (155, 192, 128), F(3, 2)),
            _Term(1, (387, 528, 384), F(2)),
            _Term(2, (7, 4), F(0), alpha_power=1),
        ),
        den_terms=(
            _Term(1, (3347, 5580, 6912, 4608), F(0)),
            _Term(-1, (5047, 9288, 12672, 9216), F(1, 2)),
        ),
    ),
    6: _PrintedForm(
        P=6,
        pref=F(64, 25),
        base_exponent=F(-1),
        num_poly=(110286921, 244372600, 516812800, 951091200, 1297612800, 943718400),
        num_terms=(
            _Term(9, (213, 224, 128), F(0), alpha_power=1),
            _Term(-8, (3347, 5580, 6912, 4608), F(3, 2)),
            _Term(6, (5047, 9288, 12672, 9216), F(2)),
        ),
        den_terms=(
            _Term(1, (1772967, 3427328, 5713920, 7077888, 4718592), F(0)),
            _Term(-2, (1221863, 2584064, 4755456, 6488064, 4718592), F(1, 2)),
        ),
    ),
    7: _PrintedForm(
        P=7,
        pref=F(25, 72),
        base_exponent=F(-1),
        num_poly=(
            14313753121,
            31762633248,
            70379308800,
            148842086400,
            273914265600,
            373712486400,
            271790899200,
        ),
        num_terms=(
            _Term(256, (1352, 1917, 2016, 1152), F(0), alpha_power=1),
            _Term(3, (1221863, 2584064, 4755456, 6488064, 4718592), F(2)),
            _Term(-2, (1772967, 3427328, 5713920, 7077888, 4718592), F(3, 2)),
        ),
        den_terms=(
            _Term(
                1,
                (110286921, 244372600, 516812800, 951091200, 1297612800, 943718400),
                F(1, 2),
            ),
            _Term(
                -4,
                (21489587, 44324175, 85683200, 142848000, 176947200, 117964800),
                F(0),
            ),
        ),
    ),
    8: _PrintedForm(
        P=8,
        pref=F(36, 49),
        base_exponent=F(-1),
        num_poly=(
            2561459619833,
            5610991223432,
            12450952233216,
            27588689049600,
            58346097868800,
            107374392115200,
            146495294668800,
            106542032486400,
        ),
        num_terms=(
            _Term(25, (3318119, 5537792, 7852032, 8257536, 4718592), F(0), alpha_power=1),
            _Term(
                -32,
                (21489587, 44324175, 85683200, 142848000, 176947200, 117964800),
                F(3, 2),
            ),
            _Term(
                6,
                (110286921, 244372600, 516812800, 951091200, 1297612800, 943718400),
                F(2),
            ),
        ),
        den_terms=(
            _Term(
                1,
                (
                    23489061277,
                    49512008448,
                    102122899200,
                    197414092800,
                    329121792000,
                    407686348800,
                    271790899200,
                ),
                F(0),
            ),
            _Term(
                -2,
                (
                    14313753121,
                    31762633248,
                    70379308800,
                    148842086400,
                    273914265600,
                    373712486400,
                    271790899200,
                ),
                F(1, 2),
            ),
        ),
    ),
    9: _PrintedForm(
        P=9,
        pref=F(49, 2048),
        base_exponent=F(-1),
        num_poly=(
            9710015233335279,
            20983477205671936,
            45965240102354944,
            101998200694505472,
            226006540694323200,
            477971233741209600,
            879611020207718400,
            1200089453926809600,
            872792330128588800,
        ),
        num_terms=(
            _Term(
                36,
                (181840923, 331811900, 553779200, 785203200, 825753600, 471859200),
                F(0),
                alpha_power=1,
            ),
            _Term(
                3,
                (
                    14313753121,
                    31762633248,
                    70379308800,
                    148842086400,
                    273914265600,
                    373712486400,
                    271790899200,
                ),
                F(2),
            ),
            _Term(
                -2,
                (
                    23489061277,
                    49512008448,
                    102122899200,
                    197414092800,
                    329121792000,
                    407686348800,
                    271790899200,
                ),
                F(3, 2),
            ),
        ),
        den_terms=(
            _Term(
                1,
                (
                    2176979199375,
                    4603856010292,
                    9704353655808,
                    20016088243200,
                    38693162188800,
                    64507871232000,
                    79906524364800,
                    53271016243200,
                ),
                F(0),
            ),
            _Term(
                -1,
                (
                    2561459619833,
                    5610991223432,
                    12450952233216,
                    27588689049600,
                    58346097868800,
                    107374392115200,
                    146495294668800,
                    106542032486400,
                ),
                F(1, 2),
            ),
        ),
    ),
    10: _PrintedForm(
        P=10,
        pref=F(1024, 81),
        base_exponent=F(-1),
        num_poly=(
            2943285782347428829,
            6292089871201260792,
            13597293229275414528,
            29785475586326003712,
            66094834050039545856,
            146452238369921433600,
            309725359464303820800,
            569987941094601523200,
            777657966144572620800,
            565569429923325542400,
        ),
        num_terms=(
            _Term(
                49,
                (
                    54705318889,
                    104740371648,
                    191123654400,
                    318976819200,
                    452277043200,
                    475634073600,
                    271790899200,
                ),
                F(0),
                alpha_power=1,
            ),
            _Term(
                -8,
                (
                    2176979199375,
                    4603856010292,
                    9704353655808,
                    20016088243200,
                    38693162188800,
                    64507871232000,
                    79906524364800,
                    53271016243200,
                ),
                F(3, 2),
            ),
            _Term(
                6,
                (
                    2561459619833,
                    5610991223432,
                    12450952233216,
                    27588689049600,
                    58346097868800,
                    107374392115200,
                    146495294668800,
                    106542032486400,
                ),
                F(2),
            ),
        ),
        den_terms=(
            _Term(
                1,
                (
                    16913362714229743,
                    35667627202560000,
                    75429576872624128,
                    158996130296758272,
                    327943589776588800,
                    633948769301299200,
                    1056896962265088000,
                    1309188495192883200,
                    872792330128588800,
                ),
                F(0),
            ),
            _Term(
                -2,
                (
                    9710015233335279,
                    20983477205671936,
                    45965240102354944,
                    101998200694505472,
                    226006540694323200,
                    477971233741209600,
                    879611020207718400,
                    1200089453926809600,
                    872792330128588800,
                ),
                F(1, 2),
            ),
        ),
    ),
}


@dataclass(frozen=True)
class ClosedForm:
    """One benchmark expression: evaluator of (alpha > 0, x = sigma^2 tau^2 >= 0)."""

    P: int
    branch: ProjectionBasis
    evaluator: Callable[[float, float], float]


def closed_form(P: int, branch: ProjectionBasis) -> ClosedForm:
    if P == 3:
        return ClosedForm(3, branch, lambda a, x: _p3(a, x, branch))
    if branch is not ProjectionBasis.DD:
        raise UsageError(f"closed form for P={P} exists only for the DD branch")
    if P not in _FORMS:
        raise UsageError(f"no closed form for P={P} (supported: 3..10)")
    return ClosedForm(P, branch, _FORMS[P].value)


def closed_form_value(
    P: int, branch: ProjectionBasis, alpha: float, x: float
) -> float:
    """Evaluate the printed closed form at (alpha, x)."""
    if not alpha > 0:
        raise UsageError(f"alpha must be positive, got {alpha}")
    if x < 0:
        raise UsageError(f"x = sigma^2 tau^2 must be nonnegative, got {x}")
    return closed_form(P, branch).evaluator(alpha, x)


@dataclass
class VerificationReport:
    """Result of comparing the engine against the closed forms over a grid."""

    rows: list[dict] = field(default_factory=list)  # P, branch, alpha, x, engine, closed_form, rel_err
    max_rel_err: float = 0.0
    worst: dict | None = None

    def record(self, row: dict) -> None:
        self.rows.append(row)
        if row["rel_err"] > self.max_rel_err:
            self.max_rel_err = row["rel_err"]
            self.worst = row


DEFAULT_ALPHAS = (0.05, 0.1, 0.5, 1.2)
DEFAULT_XS = (0.0, 0.25, 1.0, 4.0, 25.0)
DEFAULT_PS = tuple(range(3, 11))


def verify_engine(
    alphas=DEFAULT_ALPHAS,
    xs=DEFAULT_XS,
    Ps=DEFAULT_PS,
    include_ad_p3: bool = True,
    sigma: float = 1.0,
) -> VerificationReport:
    """Max relative error of the engine's g2_C(tau, 0) against every closed form.

    The engine is run through the statistics assembly at matching truncation
    and tauc=0; x is mapped to a delay via tau = sqrt(x)/sigma.
    """
    from heraldg2.statistics import CorrelationRequest, g2_conditional
    from heraldg2.correlator import SpectralModel

    spectral = SpectralModel(sigma=sigma)
    report = VerificationReport()
    cases = [(P, ProjectionBasis.DD) for P in Ps]
    if include_ad_p3 and 3 in Ps:
        cases.append((3, ProjectionBasis.AD))
    for P, branch in cases:
        for alpha in alphas:
            for x in xs:
                tau = (x**0.5) / sigma
                req = CorrelationRequest(alpha, P, branch, spectral, tau, 0.0)
                engine = g2_conditional(req).value
                ref = closed_form_value(P, branch, alpha, x)
                rel = abs(engine - ref) / abs(ref)
                report.record(
                    {
                        "p": P,
                        "branch": branch.value,
                        "alpha": alpha,
                        "x": x,
                        "engine": engine,
                        "closed_form": ref,
                        "rel_err": rel,
                    }
                )
    return report
