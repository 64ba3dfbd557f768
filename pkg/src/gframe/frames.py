"""Controlled operator-valued frame systems and their calculus.

A system bundles a finite atomic measure, a family of adjointable operators
Lambda_w: A^n -> A^{m_w}, and a pair of positive invertible controls (C, C').
The twisted Gram of the system at x is the weighted sum of
<Lambda_w C x, Lambda_w C' x>; sandwiching it between A<x,x>A* and B<x,x>B*
is the frame property this module certifies, together with the induced
frame operator, transforms, duals and multipliers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Optional

import numpy as np

from .algebra import DEFAULT_TOL, AlgebraDescriptor, AlgebraElement
from .errors import DomainError, InputError, UnsupportedConfigurationError
from .hilbert import (
    AdjointableOperator,
    DirectSumSpace,
    DirectSumVector,
    ModuleVector,
    vector_from_flat_row,
)
from .measure import MeasureSpace
from .reports import TheoremReport
from .sampling import rand_vector

FRAME = "frame"
BESSEL_ONLY = "bessel_only"


@dataclass(frozen=True)
class ControlPair:
    """Positive invertible control operators with computed commutation flags."""

    C: AdjointableOperator
    Cp: AdjointableOperator
    commute_each_other: bool
    commute_with_family: bool
    commute_defect: float
    family_defect: float

    @staticmethod
    def build(C: AdjointableOperator, Cp: AdjointableOperator,
              family: Mapping[str, AdjointableOperator], tol: float = DEFAULT_TOL) -> "ControlPair":
        for name, ctrl in (("C", C), ("C'", Cp)):
            if ctrl.in_rank != ctrl.out_rank:
                raise InputError(f"control {name} must be square")
            if not ctrl.is_hermitian(tol):
                raise InputError(f"control {name} must be self-adjoint")
            eigs = ctrl.eigenvalues_hermitian()
            if eigs[0] <= tol * max(1.0, eigs[-1]):
                raise InputError(f"control {name} must be positive and invertible")
        fc, fcp = C.flat(), Cp.flat()
        scale = max(1.0, float(np.linalg.norm(fc, 2) * np.linalg.norm(fcp, 2)))
        commute_defect = float(np.linalg.norm(fc @ fcp - fcp @ fc, 2)) / scale
        family_defect = 0.0
        for op in family.values():
            gram_block = (op.adjoint() @ op).flat()
            gscale = max(1.0, float(np.linalg.norm(gram_block, 2)))
            for ctrl_flat in (fc, fcp):
                cscale = max(1.0, float(np.linalg.norm(ctrl_flat, 2)))
                defect = float(np.linalg.norm(gram_block @ ctrl_flat - ctrl_flat @ gram_block, 2))
                family_defect = max(family_defect, defect / (gscale * cscale))
        return ControlPair(
            C=C,
            Cp=Cp,
            commute_each_other=commute_defect <= tol,
            commute_with_family=family_defect <= tol,
            commute_defect=commute_defect,
            family_defect=family_defect,
        )


@dataclass(frozen=True)
class FrameBounds:
    """Frame bounds, scalar and element form, with the certification verdict."""

    scalar_lower: float
    scalar_upper: float
    lower: Optional[AlgebraElement]
    upper: Optional[AlgebraElement]
    verdict: str

    @staticmethod
    def from_scalars(a: float, b: float, descriptor: AlgebraDescriptor,
                     tol: float = DEFAULT_TOL) -> "FrameBounds":
        verdict = FRAME if a > tol * max(1.0, b) else BESSEL_ONLY
        lower = AlgebraElement.scalar(descriptor, a) if verdict == FRAME else None
        upper = AlgebraElement.scalar(descriptor, b) if b > 0 else None
        return FrameBounds(float(a), float(b), lower, upper, verdict)

    @staticmethod
    def from_elements(lower: AlgebraElement, upper: AlgebraElement) -> "FrameBounds":
        a = 1.0 / lower.invert().norm()
        b = upper.norm()
        return FrameBounds(a, b, lower, upper, FRAME)

    @property
    def is_frame(self) -> bool:
        return self.verdict == FRAME


@dataclass(frozen=True)
class DualCertificate:
    """Reconstruction evidence for a (operator) dual family."""

    dual_family: dict
    corresponding_k: Optional[AdjointableOperator]
    reconstruction_residual: float
    tolerance: float
    details: dict

    @property
    def passed(self) -> bool:
        return self.reconstruction_residual <= self.tolerance


class GFrameSystem:
    """Measure + operator family + control pair over one standard module."""

    def __init__(self, measure: MeasureSpace, family: Mapping[str, AdjointableOperator],
                 C: AdjointableOperator, Cp: AdjointableOperator, tol: float = DEFAULT_TOL):
        if set(family) != set(measure.labels):
            raise InputError("family labels must match measure atoms exactly")
        ordered = {label: family[label] for label in measure.labels}
        ops = list(ordered.values())
        descriptor = ops[0].descriptor
        n = ops[0].in_rank
        if n < 1:
            raise InputError("module rank must be >= 1")
        for op in ops:
            if op.descriptor != descriptor or op.in_rank != n:
                raise InputError("family members must share descriptor and input rank")
        if C.descriptor != descriptor or C.in_rank != n or Cp.descriptor != descriptor or Cp.in_rank != n:
            raise InputError("controls must act on the same module as the family")
        self.measure = measure
        self.family = ordered
        self.descriptor = descriptor
        self.module_rank = n
        self.tol = tol
        self.controls = ControlPair.build(C, Cp, ordered, tol)

    # -- basic structure -----------------------------------------------------

    @cached_property
    def direct_sum(self) -> DirectSumSpace:
        return DirectSumSpace(
            descriptor=self.descriptor,
            labels=self.measure.labels,
            weights=self.measure.weights,
            ranks=tuple(op.out_rank for op in self.family.values()),
        )

    @cached_property
    def controls_equal(self) -> bool:
        diff = (self.controls.C - self.controls.Cp).norm()
        scale = max(1.0, self.controls.C.norm())
        return diff <= self.tol * scale

    @property
    def commuting(self) -> bool:
        return self.controls.commute_each_other and self.controls.commute_with_family

    @property
    def supports_transform(self) -> bool:
        """True when analysis/synthesis factorisations are exact."""
        return self.controls.commute_each_other and (
            self.controls.commute_with_family or self.controls_equal
        )

    def with_controls(self, C: AdjointableOperator, Cp: AdjointableOperator) -> "GFrameSystem":
        return GFrameSystem(self.measure, self.family, C, Cp, self.tol)

    def with_family(self, family: Mapping[str, AdjointableOperator]) -> "GFrameSystem":
        return GFrameSystem(self.measure, family, self.controls.C, self.controls.Cp, self.tol)

    # -- frame operator and Gram ----------------------------------------------

    @cached_property
    def frame_operator(self) -> AdjointableOperator:
        """Weighted sum of C' Lambda_w* Lambda_w C as one operator on A^n."""
        total = None
        C, Cp = self.controls.C, self.controls.Cp
        for label, weight in self.measure.atoms:
            op = self.family[label]
            term = weight * (Cp @ op.adjoint() @ op @ C)
            total = term if total is None else total + term
        return total

    @cached_property
    def uncontrolled_operator(self) -> AdjointableOperator:
        total = None
        for label, weight in self.measure.atoms:
            op = self.family[label]
            term = weight * (op.adjoint() @ op)
            total = term if total is None else total + term
        return total

    def gram(self, x: ModuleVector) -> AlgebraElement:
        """Twisted Gram element: weighted sum of <Lambda_w C x, Lambda_w C' x>."""
        if x.descriptor != self.descriptor or x.rank != self.module_rank:
            raise InputError("vector incompatible with the system")
        Cx = self.controls.C(x)
        Cpx = self.controls.Cp(x)
        values = {}
        for label in self.measure.labels:
            op = self.family[label]
            values[label] = op(Cx).inner(op(Cpx))
        return self.measure.integrate(values)

    # -- transforms ------------------------------------------------------------

    @cached_property
    def mixed_control_root(self) -> AdjointableOperator:
        """(C' C)^(1/2); requires commuting controls so the product is positive."""
        if not self.supports_transform:
            raise UnsupportedConfigurationError(
                "analysis/synthesis need commuting controls (or C = C')"
            )
        product = self.controls.Cp @ self.controls.C
        return product.sqrt_positive(max(self.tol, 1e-8))

    @cached_property
    def analysis_operator(self) -> AdjointableOperator:
        """Transform into the weighted direct sum, stacked as a map A^n -> A^M."""
        root = self.mixed_control_root
        comps = {label: op @ root for label, op in self.family.items()}
        return self.direct_sum.stack_operator(comps)

    @cached_property
    def synthesis_operator(self) -> AdjointableOperator:
        return self.analysis_operator.adjoint()

    def analysis(self, x: ModuleVector) -> DirectSumVector:
        """Per-atom components Lambda_w (C'C)^(1/2) x in the weighted direct sum."""
        root = self.mixed_control_root
        rx = root(x)
        comps = {label: op(rx) for label, op in self.family.items()}
        return DirectSumVector(self.direct_sum, comps)

    def synthesis(self, y: DirectSumVector) -> ModuleVector:
        """Weighted sum of (C C')^(1/2) Lambda_w* y_w; adjoint of analysis."""
        root = self.mixed_control_root
        total = ModuleVector.zero(self.descriptor, self.module_rank)
        for label, weight in self.measure.atoms:
            comp = y[label]
            op = self.family[label]
            total = total + weight * root(op.adjoint()(comp))
        return total


def controlled_gram(system: GFrameSystem, x: ModuleVector) -> AlgebraElement:
    return system.gram(x)


def frame_operator(system: GFrameSystem) -> AdjointableOperator:
    return system.frame_operator


def optimal_scalar_bounds(system: GFrameSystem, tol: float = DEFAULT_TOL) -> FrameBounds:
    """Tight scalar bounds from the spectrum of the flattened frame operator.

    Requires the frame operator to be self-adjoint positive (commuting
    controls, or C = C'); otherwise the scalar sandwich does not apply and an
    UnsupportedConfigurationError is raised.
    """
    s = system.frame_operator
    scale = max(1.0, s.norm())
    if s.hermitian_defect() > tol * scale * 10:
        raise UnsupportedConfigurationError(
            "scalar bounds need a self-adjoint frame operator; "
            "controls do not commute with the family"
        )
    eigs = s.eigenvalues_hermitian()
    lam_min, lam_max = float(eigs[0]), float(eigs[-1])
    if lam_min < -tol * scale * 10:
        raise UnsupportedConfigurationError("frame operator is not positive")
    a = float(np.sqrt(max(lam_min, 0.0)))
    b = float(np.sqrt(max(lam_max, 0.0)))
    return FrameBounds.from_scalars(a, b, system.descriptor, tol)


def _sample_vectors(system: GFrameSystem, samples: int, seed: int, adversarial: bool = True):
    """Seeded Gaussian vectors plus eigenvector witnesses of the frame operator."""
    rng = np.random.default_rng(seed)
    out = [rand_vector(system.descriptor, system.module_rank, rng) for _ in range(samples)]
    if adversarial:
        f = system.frame_operator.flat()
        h = 0.5 * (f + f.conj().T)
        _, vecs = np.linalg.eigh(h)
        for idx in (0, vecs.shape[1] - 1):
            out.append(vector_from_flat_row(system.descriptor, system.module_rank, vecs[:, idx].conj()))
    return out


def check_frame(system: GFrameSystem, bounds: FrameBounds, mode: str = "exact_scalar",
                samples: int = 200, seed: int = 0, tol: float = DEFAULT_TOL) -> TheoremReport:
    """Certify the two-sided frame inequality against the given bounds.

    ``exact_scalar`` runs positive-semidefiniteness tests on the flattened
    frame operator against the scalar bounds.  ``sampled_general`` checks the
    element-bound sandwich on seeded sample vectors (plus eigenvector
    adversaries) and records the first witness of a violation.
    """
    report = TheoremReport("FRAME-CHECK", tolerance=tol, seed=seed)
    report.info["mode"] = mode
    if mode == "exact_scalar":
        s = system.frame_operator
        scale = max(1.0, s.norm())
        report.add_hypothesis("frame operator self-adjoint",
                              s.hermitian_defect() <= tol * scale * 10,
                              s.hermitian_defect() / scale)
        if not report.hypotheses_pass:
            return report
        eigs = s.eigenvalues_hermitian()
        low_gap = float(eigs[0]) - bounds.scalar_lower ** 2
        up_gap = bounds.scalar_upper ** 2 - float(eigs[-1])
        report.add_conclusion("lower bound PSD", low_gap >= -tol * scale, max(0.0, -low_gap))
        report.add_conclusion("upper bound PSD", up_gap >= -tol * scale, max(0.0, -up_gap))
        if low_gap < -tol * scale or up_gap < -tol * scale:
            report.info["witness_eigenvalues"] = [float(eigs[0]), float(eigs[-1])]
        return report
    if mode != "sampled_general":
        raise InputError(f"unknown check mode {mode!r}")
    if bounds.lower is None or bounds.upper is None:
        raise InputError("sampled mode needs element bounds")
    report.add_hypothesis("element bounds present", True)
    a_el, b_el = bounds.lower, bounds.upper
    worst = 0.0
    witness = None
    for idx, x in enumerate(_sample_vectors(system, samples, seed)):
        gram = system.gram(x)
        xx = x.inner(x)
        scale = max(1.0, gram.norm(), xx.norm())
        low = gram - a_el * xx * a_el.adjoint()
        up = b_el * xx * b_el.adjoint() - gram
        for side, diff in (("lower", low), ("upper", up)):
            herm = 0.5 * (diff + diff.adjoint())
            lam = float(herm.eigenvalues_hermitian()[0])
            violation = max(0.0, -lam) / scale
            if violation > worst:
                worst = violation
                witness = (idx, side)
    report.add_conclusion("sampled sandwich", worst <= tol * 10, worst)
    if witness is not None and worst > tol * 10:
        report.info["witness"] = {"sample": witness[0], "side": witness[1]}
    return report


def reconstruction_operator(system: GFrameSystem, dual: Mapping[str, AdjointableOperator],
                            k: Optional[AdjointableOperator] = None) -> AdjointableOperator:
    """Weighted sum of C' Lambda_w* Gamma_w [K] C as one operator."""
    C, Cp = system.controls.C, system.controls.Cp
    inner = None
    for label, weight in system.measure.atoms:
        lam = system.family[label]
        gam = dual[label]
        term = weight * (lam.adjoint() @ gam)
        inner = term if inner is None else inner + term
    chain = inner @ k if k is not None else inner
    return Cp @ chain @ C


def _reconstruction_residuals(system: GFrameSystem, op: AdjointableOperator,
                              samples: int, seed: int) -> tuple:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = rand_vector(system.descriptor, system.module_rank, rng, unit=True)
        err = (op(x) - x).norm()
        worst = max(worst, err)
    identity = AdjointableOperator.identity(system.descriptor, system.module_rank)
    return worst, (op - identity).norm()


def canonical_dual(system: GFrameSystem, samples: int = 100, seed: int = 0,
                   tol: float = 1e-8) -> DualCertificate:
    """Dual family Lambda_w S^(-1) with verified reconstruction."""
    if not system.commuting:
        raise UnsupportedConfigurationError(
            "canonical dual reconstruction needs commuting controls")
    bounds = optimal_scalar_bounds(system)
    if not bounds.is_frame:
        raise DomainError("system is not a frame; frame operator is singular")
    s_inv = system.frame_operator.inverse()
    dual = {label: op @ s_inv for label, op in system.family.items()}
    recon = reconstruction_operator(system, dual)
    sampled, op_res = _reconstruction_residuals(system, recon, samples, seed)
    return DualCertificate(
        dual_family=dual,
        corresponding_k=None,
        reconstruction_residual=sampled,
        tolerance=tol,
        details={"operator_residual": op_res, "samples": samples, "seed": seed},
    )


def operator_dual_check(system: GFrameSystem, dual: Mapping[str, AdjointableOperator],
                        k: AdjointableOperator, samples: int = 100, seed: int = 0,
                        tol: float = 1e-8) -> DualCertificate:
    """Certify x = integral of C' Lambda_w* Gamma_w K C x, and its converse.

    The converse exchanges the two families and replaces K by K*; both
    directions are sampled and the worst relative residual is reported.
    """
    k.inverse()  # raises DomainError if K is singular
    forward = reconstruction_operator(system, dual, k)
    sampled, op_res = _reconstruction_residuals(system, forward, samples, seed)
    swapped = GFrameSystem(system.measure, dual, system.controls.C, system.controls.Cp, system.tol)
    backward = reconstruction_operator(swapped, system.family, k.adjoint())
    sampled_back, op_res_back = _reconstruction_residuals(swapped, backward, samples, seed + 1)
    return DualCertificate(
        dual_family=dict(dual),
        corresponding_k=k,
        reconstruction_residual=max(sampled, sampled_back),
        tolerance=tol,
        details={
            "forward_residual": sampled,
            "converse_residual": sampled_back,
            "operator_residual": op_res,
            "converse_operator_residual": op_res_back,
            "samples": samples,
            "seed": seed,
        },
    )


def bessel_constant(family: Mapping[str, AdjointableOperator], measure: MeasureSpace,
                    C: Optional[AdjointableOperator] = None,
                    Cp: Optional[AdjointableOperator] = None) -> float:
    """Optimal scalar Bessel constant of the (optionally controlled) family."""
    ops = list(family.values())
    descriptor = ops[0].descriptor
    n = ops[0].in_rank
    if C is None:
        C = AdjointableOperator.identity(descriptor, n)
    if Cp is None:
        Cp = C
    system = GFrameSystem(measure, family, C, Cp)
    return optimal_scalar_bounds(system).scalar_upper


def multiplier(gamma: Mapping[str, complex], lam: Mapping[str, AdjointableOperator],
               theta: Mapping[str, AdjointableOperator], measure: MeasureSpace) -> AdjointableOperator:
    """Weighted sum of gamma_w Lambda_w* Theta_w for a bounded scalar symbol."""
    total = None
    for label, weight in measure.atoms:
        if label not in gamma or label not in lam or label not in theta:
            raise InputError(f"multiplier data missing atom {label!r}")
        term = (weight * complex(gamma[label])) * (lam[label].adjoint() @ theta[label])
        total = term if total is None else total + term
    return total


def multiplier_report(gamma: Mapping[str, complex], lam: Mapping[str, AdjointableOperator],
                      theta: Mapping[str, AdjointableOperator], measure: MeasureSpace,
                      tol: float = DEFAULT_TOL) -> dict:
    """Multiplier with its norm bound and the adjoint identity.

    The enforced norm bound is the product of the symbol sup-norm with the two
    scalar Bessel constants.  The squared variant of that product is reported
    alongside for reference, not enforced.  The adjoint is compared against
    the conjugate-symbol multiplier with the two families exchanged; the
    unswapped variant is reported as well and flagged when it differs.
    """
    op = multiplier(gamma, lam, theta, measure)
    sup = max((abs(complex(v)) for v in gamma.values()), default=0.0)
    b_lam = bessel_constant(lam, measure)
    b_theta = bessel_constant(theta, measure)
    bound = sup * b_lam * b_theta
    gamma_conj = {label: np.conj(complex(v)) for label, v in gamma.items()}
    swapped = multiplier(gamma_conj, theta, lam, measure)
    unswapped = multiplier(gamma_conj, lam, theta, measure)
    adj_flat = op.flat().conj().T
    scale = max(1.0, op.norm())
    swapped_res = float(np.linalg.norm(adj_flat - swapped.flat(), 2)) / scale
    unswapped_res = float(np.linalg.norm(adj_flat - unswapped.flat(), 2)) / scale
    return {
        "operator": op,
        "op_norm": op.norm(),
        "bound_product": bound,
        "bound_squared": (sup ** 2) * (b_lam ** 2) * (b_theta ** 2),
        "norm_within_bound": op.norm() <= bound + tol * max(1.0, bound),
        "adjoint_swapped_residual": swapped_res,
        "adjoint_unswapped_residual": unswapped_res,
        "statement_form_matches": unswapped_res <= tol * 10,
    }


def controlled_multiplier(gamma: Mapping[str, complex], theta: Mapping[str, AdjointableOperator],
                          lam: Mapping[str, AdjointableOperator], C: AdjointableOperator,
                          Cp: AdjointableOperator, measure: MeasureSpace) -> AdjointableOperator:
    """Weighted sum of gamma_w C theta_w* Lambda_w C'."""
    total = None
    for label, weight in measure.atoms:
        if label not in gamma or label not in lam or label not in theta:
            raise InputError(f"multiplier data missing atom {label!r}")
        term = (weight * complex(gamma[label])) * (C @ theta[label].adjoint() @ lam[label] @ Cp)
        total = term if total is None else total + term
    return total


def controlled_multiplier_report(gamma: Mapping[str, complex],
                                 theta: Mapping[str, AdjointableOperator],
                                 lam: Mapping[str, AdjointableOperator],
                                 C: AdjointableOperator, Cp: AdjointableOperator,
                                 measure: MeasureSpace, tol: float = DEFAULT_TOL) -> dict:
    """Controlled multiplier with the Bessel-constant norm bound.

    The constants come from the squared-control systems: theta with controls
    (C, C) and lambda with controls (C', C').
    """
    op = controlled_multiplier(gamma, theta, lam, C, Cp, measure)
    sup = max((abs(complex(v)) for v in gamma.values()), default=0.0)
    b_theta = bessel_constant(theta, measure, C, C)
    b_lam = bessel_constant(lam, measure, Cp, Cp)
    bound = sup * b_theta * b_lam
    return {
        "operator": op,
        "op_norm": op.norm(),
        "bound_product": bound,
        "bessel_theta": b_theta,
        "bessel_lambda": b_lam,
        "norm_within_bound": op.norm() <= bound + tol * max(1.0, bound),
    }
