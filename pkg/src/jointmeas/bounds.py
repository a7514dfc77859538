"""Accuracy-tradeoff inequalities for approximate joint measurement.

Every bound has the same shape: a function of the two reconstruction
accuracies X = D(A, f_A(F)) and Y = D(B, f_B(F)) (plus intrinsic
uncertainties of A and B) on the left, and a noncommutativity measure of the
pair (A, B) on the right. The main inequality

    2XY + X + Y + 2 sqrt(2X + V(A)) sqrt(2Y + V(B))  >=  max_{a,b} ||[A_a, B_b]||

holds for every choice of joint observable F and outcome functions, in the
uniform distance with V the elementwise intrinsic uncertainty; the
total-variation version replaces every max over outcomes by a max over
outcome subsets. Specializations: projective A and B (V = 0), exactly
reproduced marginals (X = Y = 0, a necessary condition for joint
measurability), projective F (the square-root term drops), and sharp qubit
pairs at Bloch angle theta (right side sin(theta)/2), where the bound is
compared against the additive bound of Busch and Heinosaari.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .distances import D_inf, D_l1
from .povm import (
    Povm,
    bloch_pvm,
    intrinsic_uncertainty_inf,
    intrinsic_uncertainty_l1,
    is_pvm,
)
from .smearing import OutcomeMap, marginalize
from .subsets import check_subset_capacity, gray_walk

# Bounds are reported satisfied when lhs - rhs >= -SLACK_TOL. All quantities
# are O(1), so an absolute threshold is appropriate.
SLACK_TOL = 1e-9

INEQUALITY_IDS = (
    "theorem1",
    "theorem2",
    "cor_pvm_inf",
    "cor_joint",
    "cor_pvm_instrument",
    "cor_pvm_l1",
    "qubit",
    "heinosaari",
)


@dataclass(frozen=True)
class TradeoffReport:
    """Evaluated left and right side of one tradeoff inequality."""

    inequality_id: str
    X: float
    Y: float
    V_A: float
    V_B: float
    lhs: float
    rhs: float
    note: str = ""

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    @property
    def satisfied(self) -> bool:
        return self.slack >= -SLACK_TOL

    def __str__(self) -> str:
        status = "satisfied" if self.satisfied else "violated"
        line = (
            f"{self.inequality_id}: lhs = {self.lhs:.12g}, rhs = {self.rhs:.12g}, "
            f"slack = {self.slack:.12g} ({status})"
        )
        if self.note:
            line += f"\n  note: {self.note}"
        return line


def max_commutator_norm(a: Povm, b: Povm) -> float:
    """max over outcome pairs (a, b) of ||[A_a, B_b]||."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    ea = linalg.hermitian_part(a.elements)
    eb = linalg.hermitian_part(b.elements)
    prod = np.einsum("aij,bjk->abik", ea, eb)
    comm = 1j * (prod - np.conj(np.swapaxes(prod, -1, -2)))
    return float(linalg.herm_norm_stack(comm).max())


def max_subset_commutator_norm(a: Povm, b: Povm) -> float:
    """max over subset pairs (D_A, D_B) of ||[sum_{a in D_A} A_a, sum_{b in D_B} B_b]||.

    Complementing either subset only flips the sign of the commutator (the
    elements sum to the identity), so one representative of each complement
    pair suffices on both sides.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    check_subset_capacity(a.n_outcomes, "the subset commutator bound")
    check_subset_capacity(b.n_outcomes, "the subset commutator bound")
    ea = linalg.hermitian_part(a.elements)
    eb = linalg.hermitian_part(b.elements)
    d = a.dim
    best = 0.0
    s_a = np.zeros((d, d), dtype=complex)
    for mask_a, flip_a, sign_a, canon_a in gray_walk(a.n_outcomes):
        if flip_a >= 0:
            s_a += sign_a * ea[flip_a]
        if not canon_a or mask_a == 0:
            continue
        # commutators of the current A-subset sum with each element of B
        base = 1j * (s_a @ eb - eb @ s_a)
        running = np.zeros((d, d), dtype=complex)
        for mask_b, flip_b, sign_b, canon_b in gray_walk(b.n_outcomes):
            if flip_b >= 0:
                running += sign_b * base[flip_b]
            if not canon_b or mask_b == 0:
                continue
            val = float(linalg.herm_norm_stack(running))
            if val > best:
                best = val
    return best


def theorem1_lhs(x: float, y: float, v_a: float, v_b: float) -> float:
    """Left side of the main tradeoff bound:
    2XY + X + Y + 2 sqrt(2X + V_A) sqrt(2Y + V_B)."""
    for name, v in (("X", x), ("Y", y), ("V_A", v_a), ("V_B", v_b)):
        if v < 0:
            raise ValueError(f"{name} must be nonnegative, got {v}")
    return 2 * x * y + x + y + 2 * math.sqrt(2 * x + v_a) * math.sqrt(2 * y + v_b)


def _accuracies_inf(a, b, f_povm, f_a, f_b) -> tuple[float, float]:
    x = D_inf(a, marginalize(f_povm, f_a)).value
    y = D_inf(b, marginalize(f_povm, f_b)).value
    return x, y


def _accuracies_l1(a, b, f_povm, f_a, f_b) -> tuple[float, float]:
    x = D_l1(a, marginalize(f_povm, f_a)).value
    y = D_l1(b, marginalize(f_povm, f_b)).value
    return x, y


def check_theorem1(
    a: Povm, b: Povm, f_povm: Povm, f_a: OutcomeMap, f_b: OutcomeMap
) -> TradeoffReport:
    """Evaluate the main (uniform-distance) tradeoff bound.

    The inequality holds for every valid input; a violated report signals an
    implementation bug, not an interesting instance.
    """
    if a.dim != b.dim or a.dim != f_povm.dim:
        raise ValueError("all POVMs must share one dimension")
    x, y = _accuracies_inf(a, b, f_povm, f_a, f_b)
    v_a = intrinsic_uncertainty_inf(a)
    v_b = intrinsic_uncertainty_inf(b)
    return TradeoffReport(
        inequality_id="theorem1",
        X=x,
        Y=y,
        V_A=v_a,
        V_B=v_b,
        lhs=theorem1_lhs(x, y, v_a, v_b),
        rhs=max_commutator_norm(a, b),
    )


def check_theorem2(
    a: Povm, b: Povm, f_povm: Povm, f_a: OutcomeMap, f_b: OutcomeMap
) -> TradeoffReport:
    """Evaluate the total-variation tradeoff bound (subset-summed quantities
    on both sides)."""
    if a.dim != b.dim or a.dim != f_povm.dim:
        raise ValueError("all POVMs must share one dimension")
    x, y = _accuracies_l1(a, b, f_povm, f_a, f_b)
    v_a = intrinsic_uncertainty_l1(a)
    v_b = intrinsic_uncertainty_l1(b)
    return TradeoffReport(
        inequality_id="theorem2",
        X=x,
        Y=y,
        V_A=v_a,
        V_B=v_b,
        lhs=theorem1_lhs(x, y, v_a, v_b),
        rhs=max_subset_commutator_norm(a, b),
    )


def check_corollary_pvm(
    a: Povm, b: Povm, f_povm: Povm, f_a: OutcomeMap, f_b: OutcomeMap
) -> TradeoffReport:
    """Uniform-distance bound for a projective pair (intrinsic uncertainties
    vanish): 2XY + X + Y + 4 sqrt(XY) >= max ||[A_a, B_b]||."""
    if not (is_pvm(a) and is_pvm(b)):
        raise ValueError("both observables must be projective for this bound")
    x, y = _accuracies_inf(a, b, f_povm, f_a, f_b)
    return TradeoffReport(
        inequality_id="cor_pvm_inf",
        X=x,
        Y=y,
        V_A=0.0,
        V_B=0.0,
        lhs=theorem1_lhs(x, y, 0.0, 0.0),
        rhs=max_commutator_norm(a, b),
    )


def check_corollary_pvm_l1(
    a: Povm, b: Povm, f_povm: Povm, f_a: OutcomeMap, f_b: OutcomeMap
) -> TradeoffReport:
    """Total-variation bound for a projective pair."""
    if not (is_pvm(a) and is_pvm(b)):
        raise ValueError("both observables must be projective for this bound")
    x, y = _accuracies_l1(a, b, f_povm, f_a, f_b)
    return TradeoffReport(
        inequality_id="cor_pvm_l1",
        X=x,
        Y=y,
        V_A=0.0,
        V_B=0.0,
        lhs=theorem1_lhs(x, y, 0.0, 0.0),
        rhs=max_subset_commutator_norm(a, b),
    )


def check_corollary_joint(a: Povm, b: Povm) -> TradeoffReport:
    """Necessary condition for exact joint measurability:
    sqrt(V(A) V(B)) >= (1/2) max ||[A_a, B_b]||.

    A violated report proves the pair is NOT jointly measurable; a satisfied
    report is inconclusive.
    """
    v_a = intrinsic_uncertainty_inf(a)
    v_b = intrinsic_uncertainty_inf(b)
    return TradeoffReport(
        inequality_id="cor_joint",
        X=0.0,
        Y=0.0,
        V_A=v_a,
        V_B=v_b,
        lhs=math.sqrt(v_a * v_b),
        rhs=max_commutator_norm(a, b) / 2,
        note=(
            "necessary condition only: a violation certifies that the pair is "
            "not jointly measurable; satisfaction is inconclusive"
        ),
    )


def check_corollary_pvm_instrument(
    a: Povm, b: Povm, f_povm: Povm, f_a: OutcomeMap, f_b: OutcomeMap
) -> TradeoffReport:
    """Tradeoff bound when the joint observable itself is projective:
    2XY + X + Y >= max ||[A_a, B_b]||."""
    if not is_pvm(f_povm):
        raise ValueError("the joint observable must be projective for this bound")
    x, y = _accuracies_inf(a, b, f_povm, f_a, f_b)
    return TradeoffReport(
        inequality_id="cor_pvm_instrument",
        X=x,
        Y=y,
        V_A=0.0,
        V_B=0.0,
        lhs=2 * x * y + x + y,
        rhs=max_commutator_norm(a, b),
    )


def _bloch_angle(n, m) -> float:
    u = np.asarray(n, dtype=float).reshape(-1)
    v = np.asarray(m, dtype=float).reshape(-1)
    return float(np.arccos(np.clip(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)), -1, 1)))


def qubit_rhs(theta: float) -> float:
    """Commutator-norm bound sin(theta)/2 for two sharp qubit observables at
    Bloch angle theta in [0, pi/2]."""
    if not 0.0 <= theta <= math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
    return math.sin(theta) / 2


def heinosaari_lower_bound(theta: float) -> float:
    """Busch-Heinosaari additive bound for sharp qubit pairs:
    X + Y >= sqrt(1/2) (cos(theta/2) + sin(theta/2) - 1)."""
    return math.sqrt(0.5) * (math.cos(theta / 2) + math.sin(theta / 2) - 1)


def check_qubit_pair(n, m, f_povm: Povm, f_a: OutcomeMap, f_b: OutcomeMap) -> TradeoffReport:
    """Specialize the projective-pair bound to two Bloch-sphere qubit
    observables; the right side is sin(theta)/2 in closed form."""
    theta = _bloch_angle(n, m)
    a = bloch_pvm(n)
    b = bloch_pvm(m)
    x, y = _accuracies_inf(a, b, f_povm, f_a, f_b)
    return TradeoffReport(
        inequality_id="qubit",
        X=x,
        Y=y,
        V_A=0.0,
        V_B=0.0,
        lhs=theorem1_lhs(x, y, 0.0, 0.0),
        rhs=qubit_rhs(theta),
    )


def check_heinosaari(n, m, f_povm: Povm, f_a: OutcomeMap, f_b: OutcomeMap) -> TradeoffReport:
    """Additive comparison bound for sharp qubit pairs: X + Y against the
    Busch-Heinosaari value."""
    theta = _bloch_angle(n, m)
    a = bloch_pvm(n)
    b = bloch_pvm(m)
    x, y = _accuracies_inf(a, b, f_povm, f_a, f_b)
    return TradeoffReport(
        inequality_id="heinosaari",
        X=x,
        Y=y,
        V_A=0.0,
        V_B=0.0,
        lhs=x + y,
        rhs=heinosaari_lower_bound(theta),
    )


@dataclass(frozen=True, eq=False)
class AdmissibleRegion:
    """Boundary curves of the accuracy pairs (X, Y) not excluded by the two
    qubit bounds, on a shared X grid."""

    theta: float
    x: np.ndarray
    y_product_bound: np.ndarray  # contour of 2XY + X + Y + 4 sqrt(XY) = sin(theta)/2
    y_additive_bound: np.ndarray  # line X + Y = Busch-Heinosaari bound


# Contour bisection tolerance; the left side is monotone in Y so plain
# bisection is robust and derivative-free.
_CONTOUR_TOL = 1e-10


def _product_bound_contour_y(x: float, target: float) -> float:
    """Smallest Y >= 0 with 2XY + X + Y + 4 sqrt(XY) >= target."""

    def lhs(y: float) -> float:
        return 2 * x * y + x + y + 4 * math.sqrt(x * y)

    if lhs(0.0) >= target:
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > _CONTOUR_TOL:
        mid = (lo + hi) / 2
        if lhs(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def admissible_region_curves(
    theta: float, grid_size: int, x_max: float = 0.5, rhs: float | None = None
) -> AdmissibleRegion:
    """Sample both qubit bound curves on a uniform X grid over [0, x_max].

    For two-outcome qubit observables the interesting region ends by X = 1/2
    (where the product-bound contour reaches Y = 0 for any theta <= pi/2),
    hence the default sweep range. `rhs` overrides the contour target (for
    example with a commutator norm computed from an actual projector pair
    instead of the closed form).
    """
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    target = qubit_rhs(theta) if rhs is None else rhs
    h = heinosaari_lower_bound(theta)
    xs = np.linspace(0.0, x_max, grid_size)
    y1 = np.array([_product_bound_contour_y(float(x), target) for x in xs])
    y2 = np.maximum(h - xs, 0.0)
    for arr in (xs, y1, y2):
        arr.setflags(write=False)
    return AdmissibleRegion(theta=theta, x=xs, y_product_bound=y1, y_additive_bound=y2)
