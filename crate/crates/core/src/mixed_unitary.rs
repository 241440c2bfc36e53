//! Mixed-unitary decompositions `Φ(A) = Σ w_j U_j A U_j*` of unital qubit
//! channels.
//!
//! A weight vector `w` is achievable iff `w ≺ ½λ`, where λ is the Choi
//! spectrum. The constructive direction starts from the canonical Pauli
//! decomposition with weights `½λ` and walks to the target through a chain
//! of pinchings, each realized by rebalancing one pair of terms.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::canonical::canonicalize;
use crate::channel::{pauli_basis_deviation, ChoiSpectrum, QubitChannel};
use crate::error::{Error, Result};
use crate::linalg::{c, diagonalize_unitary2, pauli_basis, Complex, ComplexMatrix2, ONE};

const PINCH_EPS: f64 = 1e-12;

/// Non-negative weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    pub weights: Vec<f64>,
}

impl WeightVector {
    /// Rejects non-finite entries and entries below `-tol`.
    pub fn new(weights: Vec<f64>, tol: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::BadCoefficients("empty weight vector".into()));
        }
        if let Some(k) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFinite(format!("weight {k}")));
        }
        if let Some(k) = weights.iter().position(|&w| w < -tol) {
            return Err(Error::BadCoefficients(format!(
                "weight {k} is negative ({})",
                weights[k]
            )));
        }
        Ok(WeightVector { weights })
    }

    pub fn uniform(m: usize) -> Self {
        WeightVector {
            weights: vec![1.0 / m as f64; m],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut w = self.weights.clone();
        w.sort_by(|a, b| b.total_cmp(a));
        w
    }
}

impl From<&ChoiSpectrum> for WeightVector {
    /// `½λ`
    fn from(s: &ChoiSpectrum) -> Self {
        WeightVector {
            weights: s.lambdas.iter().map(|l| 0.5 * l).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MajorizationCheck {
    pub holds: bool,
    /// 1-based length of the first prefix whose sum exceeds the bound.
    pub violated_prefix: Option<usize>,
    /// Prefix sums of u and v at the violation (or at the full length).
    pub lhs: f64,
    pub rhs: f64,
}

/// Sorted, zero-padded prefix sums.
fn prefix_sums(x: &[f64], m: usize) -> Vec<f64> {
    let mut s = x.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s.resize(m, 0.0);
    s.iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// Does `v` majorize `u` (`u ≺ v`)? Shorter vectors are padded with zeros.
pub fn majorizes(u: &WeightVector, v: &WeightVector, tol: f64) -> Result<MajorizationCheck> {
    let (su, sv) = (u.sum(), v.sum());
    if (su - sv).abs() > tol {
        return Err(Error::SumMismatch { lhs: su, rhs: sv });
    }
    let m = u.len().max(v.len());
    let pu = prefix_sums(&u.weights, m);
    let pv = prefix_sums(&v.weights, m);
    for k in 0..m {
        if pu[k] > pv[k] + tol {
            return Ok(MajorizationCheck {
                holds: false,
                violated_prefix: Some(k + 1),
                lhs: pu[k],
                rhs: pv[k],
            });
        }
    }
    Ok(MajorizationCheck {
        holds: true,
        violated_prefix: None,
        lhs: su,
        rhs: sv,
    })
}

/// Phases with `ν1 e^{iθ1} + ν2 e^{iθ2} = η1 + η2 e^{iθ}`, both in [0, 2π).
pub fn solve_phases(
    eta1: f64,
    eta2: f64,
    nu1: f64,
    nu2: f64,
    theta: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if ![eta1, eta2, nu1, nu2, theta].iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("phase problem".into()));
    }
    let interlaced = eta1 + tol >= nu1 && nu1 + tol >= nu2 && nu2 + tol >= eta2 && eta2 >= -tol;
    if !interlaced || (eta1 + eta2 - nu1 - nu2).abs() > tol {
        return Err(Error::PreconditionViolated(format!(
            "need η1 ≥ ν1 ≥ ν2 ≥ η2 ≥ 0 and η1 + η2 = ν1 + ν2, got η = ({eta1}, {eta2}), ν = ({nu1}, {nu2})"
        )));
    }
    let target = c(eta1, 0.0) + Complex::from_polar(eta2, theta);
    let r = target.norm();
    let phi = if nu1 * nu2 > 0.0 {
        ((r * r - nu1 * nu1 - nu2 * nu2) / (2.0 * nu1 * nu2))
            .clamp(-1.0, 1.0)
            .acos()
    } else {
        0.0
    };
    let arg = |z: Complex| if z.norm() == 0.0 { 0.0 } else { z.arg() };
    let theta1 = arg(target) - arg(c(nu1, 0.0) + Complex::from_polar(nu2, phi));
    let theta2 = phi + theta1;
    Ok((wrap(theta1), wrap(theta2)))
}

fn wrap(x: f64) -> f64 {
    let t = x.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// `Σ w_j U_j A U_j*`
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryDecomposition {
    pub weights: WeightVector,
    pub unitaries: Vec<ComplexMatrix2>,
}

impl UnitaryDecomposition {
    pub fn new(weights: Vec<f64>, unitaries: Vec<ComplexMatrix2>) -> Self {
        assert_eq!(weights.len(), unitaries.len(), "one unitary per weight");
        UnitaryDecomposition {
            weights: WeightVector { weights },
            unitaries,
        }
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn apply(&self, a: &ComplexMatrix2) -> ComplexMatrix2 {
        self.weights
            .weights
            .iter()
            .zip(&self.unitaries)
            .map(|(w, u)| u.conjugate(a).scale_re(*w))
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerificationReport {
    /// Max over the Pauli basis of ‖Σ w U σ U* − Φ(σ)‖_F.
    pub residual: f64,
    /// Largest ‖U*U − I‖_F among the unitaries.
    pub unitarity_defect: f64,
    /// |Σ w − 1|
    pub weight_sum_defect: f64,
    pub min_weight: f64,
    pub unitaries_ok: bool,
    pub weights_ok: bool,
}

impl VerificationReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.residual <= tol && self.unitaries_ok && self.weights_ok
    }
}

pub fn verify(dec: &UnitaryDecomposition, ch: &QubitChannel, tol: f64) -> VerificationReport {
    let residual = pauli_basis_deviation(|a| dec.apply(a), |a| ch.apply(a));
    let unitarity_defect = dec
        .unitaries
        .iter()
        .map(|u| u.unitarity_defect())
        .fold(0.0, f64::max);
    let weight_sum_defect = (dec.weights.sum() - 1.0).abs();
    let min_weight = dec
        .weights
        .weights
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    VerificationReport {
        residual,
        unitarity_defect,
        weight_sum_defect,
        min_weight,
        unitaries_ok: unitarity_defect <= tol,
        weights_ok: weight_sum_defect <= tol && min_weight >= -tol,
    }
}

/// Replace `η1 V1·V1* + η2 V2·V2*` by `ν1 U1·U1* + ν2 U2·U2*` for interlacing
/// weights `η1 ≥ ν1 ≥ ν2 ≥ η2` with the same total.
pub fn rebalance_pair(
    pair: &UnitaryDecomposition,
    nu1: f64,
    nu2: f64,
    tol: f64,
) -> Result<UnitaryDecomposition> {
    if pair.len() != 2 || pair.weights.len() != 2 {
        return Err(Error::PreconditionViolated(format!(
            "rebalance_pair needs two terms, got {}",
            pair.len()
        )));
    }
    let (eta1, eta2) = (pair.weights.weights[0], pair.weights.weights[1]);
    let (v1, v2) = (pair.unitaries[0], pair.unitaries[1]);
    // V1* V2 = α W diag(1, e^{iθ}) W*
    let fac = diagonalize_unitary2(&(v1.adjoint() * v2), tol)?;
    let (theta1, theta2) = solve_phases(eta1, eta2, nu1, nu2, fac.theta, tol)?;
    let lift = |t: f64| {
        let d = ComplexMatrix2::diag([ONE, Complex::from_polar(1.0, t)]);
        v1 * fac.w * d * fac.w.adjoint()
    };
    Ok(UnitaryDecomposition::new(
        vec![nu1, nu2],
        vec![lift(theta1), lift(theta2)],
    ))
}

/// Moves `delta` from entry `first` to entry `second` (`first < second`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PinchStep {
    pub first: usize,
    pub second: usize,
    pub delta: f64,
}

impl PinchStep {
    pub fn apply(&self, v: &mut [f64]) {
        v[self.first] -= self.delta;
        v[self.second] += self.delta;
    }
}

/// A chain of at most `m − 1` pinchings turning `v` into `u` when `u ≺ v`.
///
/// Both vectors are sorted descending and zero-padded to a common length `m`.
/// Each step acts on a pair that is adjacent once the coordinates where the
/// current vector already agrees with `u` are ignored.
pub fn pinch_chain(u: &WeightVector, v: &WeightVector) -> Result<Vec<PinchStep>> {
    let m = u.len().max(v.len());
    let eps = PINCH_EPS * v.sum().abs().max(1.0);
    let check = majorizes(u, v, eps)?;
    if let Some(prefix) = check.violated_prefix {
        return Err(Error::NotMajorized {
            prefix,
            lhs: check.lhs,
            rhs: check.rhs,
        });
    }
    let mut target = u.sorted_desc();
    target.resize(m, 0.0);
    let mut work = v.sorted_desc();
    work.resize(m, 0.0);

    let mut steps = Vec::new();
    for _ in 0..m {
        let active: Vec<usize> = (0..m)
            .filter(|&i| (work[i] - target[i]).abs() > eps)
            .collect();
        if active.len() < 2 {
            break;
        }
        let pair = active.windows(2).find(|w| {
            let (a, b) = (w[0], w[1]);
            work[a] > target[a] && target[b] > work[b]
        });
        let Some(&[a, b]) = pair else {
            return Err(Error::PreconditionViolated(
                "no pinchable pair; vectors are not majorized at working precision".into(),
            ));
        };
        let delta = (work[a] - target[a]).min(target[b] - work[b]);
        let step = PinchStep {
            first: a,
            second: b,
            delta,
        };
        step.apply(&mut work);
        for i in [a, b] {
            if (work[i] - target[i]).abs() <= eps {
                work[i] = target[i];
            }
        }
        steps.push(step);
    }
    Ok(steps)
}

fn require_channel(ch: &QubitChannel, tol: f64) -> Result<()> {
    let report = ch.require_unital_tp_hp(tol)?;
    if !report.completely_positive {
        return Err(Error::NotChannel {
            min_eigenvalue: report.min_choi_eigenvalue.unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// The canonical decomposition with weights `½λ` (descending) and unitaries
/// `v* P u*` for P = I, Z, X, Y.
pub fn spectral_decomposition(ch: &QubitChannel, tol: f64) -> Result<UnitaryDecomposition> {
    require_channel(ch, tol)?;
    let can = canonicalize(ch, tol)?;
    let [id, x, y, z] = pauli_basis();
    let frame = |p: ComplexMatrix2| can.v.adjoint() * p * can.u.adjoint();
    Ok(UnitaryDecomposition::new(
        can.spectrum.lambdas.iter().map(|l| 0.5 * l.max(0.0)).collect(),
        vec![frame(id), frame(z), frame(x), frame(y)],
    ))
}

/// Four unitaries with equal weight ¼.
pub fn average_of_four(ch: &QubitChannel, tol: f64) -> Result<UnitaryDecomposition> {
    require_channel(ch, tol)?;
    let can = canonicalize(ch, tol)?;
    let [l1, l2, l3, l4] = can.spectrum.lambdas.map(|l| l.max(0.0).sqrt());
    let alpha = c(l1, l2) * FRAC_1_SQRT_2;
    let beta = c(l4, l3) * FRAC_1_SQRT_2;
    let (ac, bc) = (alpha.conj(), beta.conj());
    let canonical_frame = [
        ComplexMatrix2::new(alpha, bc, -beta, ac),
        ComplexMatrix2::new(alpha, -bc, beta, ac),
        ComplexMatrix2::new(ac, beta, -bc, alpha),
        ComplexMatrix2::new(ac, -beta, bc, alpha),
    ];
    let unitaries = canonical_frame
        .iter()
        .map(|w| can.v.adjoint() * *w * can.u.adjoint())
        .collect();
    let dec = UnitaryDecomposition::new(vec![0.25; 4], unitaries);
    let report = verify(&dec, ch, tol);
    if !report.passed(tol) {
        return Err(Error::ResidualExceeded {
            residual: report.residual,
            tol,
        });
    }
    Ok(dec)
}

/// Decomposition with the given weights, in the given order. Fails with
/// [`Error::NotMajorized`] when `target ⊀ ½λ`.
pub fn decompose(
    ch: &QubitChannel,
    target: &WeightVector,
    tol: f64,
) -> Result<UnitaryDecomposition> {
    let start = spectral_decomposition(ch, tol)?;
    let total = target.sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::SumMismatch { lhs: total, rhs: 1.0 });
    }
    let half = start.weights.clone();
    let check = majorizes(target, &half, tol)?;
    if let Some(prefix) = check.violated_prefix {
        return Err(Error::NotMajorized {
            prefix,
            lhs: check.lhs,
            rhs: check.rhs,
        });
    }

    let n = target.len();
    let m = n.max(half.len());
    // clean, renormalized copies: the chain works at 1e-12 precision
    let clean = |w: &[f64]| {
        let w: Vec<f64> = w.iter().map(|x| x.max(0.0)).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect::<Vec<_>>()
    };
    let target_w = clean(&target.weights);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| target_w[b].total_cmp(&target_w[a]));

    let mut weights = clean(&half.weights);
    weights.resize(m, 0.0);
    let mut unitaries = start.unitaries.clone();
    unitaries.resize(m, ComplexMatrix2::identity());

    let mut sorted_target: Vec<f64> = order.iter().map(|&k| target_w[k]).collect();
    sorted_target.resize(m, 0.0);
    // The small residual mismatch left after majorization at `tol` is
    // absorbed by projecting onto the chain's exact endpoint.
    let steps = pinch_chain(
        &WeightVector {
            weights: sorted_target.clone(),
        },
        &WeightVector {
            weights: weights.clone(),
        },
    )
    .map_err(|e| match e {
        Error::NotMajorized { .. } => Error::NotMajorized {
            prefix: check.violated_prefix.unwrap_or(1),
            lhs: check.lhs,
            rhs: check.rhs,
        },
        other => other,
    })?;

    for step in &steps {
        let (p, q) = (step.first, step.second);
        let pair = UnitaryDecomposition::new(
            vec![weights[p], weights[q]],
            vec![unitaries[p], unitaries[q]],
        );
        let nu1 = weights[p] - step.delta;
        let nu2 = weights[q] + step.delta;
        let rebalanced = rebalance_pair(&pair, nu1, nu2, tol.max(1e-12))?;
        weights[p] = nu1;
        weights[q] = nu2;
        unitaries[p] = rebalanced.unitaries[0];
        unitaries[q] = rebalanced.unitaries[1];
    }

    let mut out_w = vec![0.0; n];
    let mut out_u = vec![ComplexMatrix2::identity(); n];
    for (slot, &k) in order.iter().enumerate() {
        out_w[k] = target.weights[k];
        if target_w[k] > 0.0 {
            out_u[k] = unitaries[slot];
        }
    }
    let dec = UnitaryDecomposition::new(out_w, out_u);
    let report = verify(&dec, ch, tol);
    if report.residual > tol || !report.unitaries_ok {
        return Err(Error::ResidualExceeded {
            residual: report.residual,
            tol,
        });
    }
    Ok(dec)
}
