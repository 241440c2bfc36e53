//! Qubit channels in four interchangeable representations.
//!
//! The Choi matrix convention is `C(Φ) = Σ_ij E_ij ⊗ Φ(E_ij)`: the left
//! tensor factor indexes the input. A Kraus operator `F` contributes `v v*`
//! to the Choi matrix, where `v` stacks the columns of `F`.
//!
//! Bloch coordinates use row vectors: the affine map `b ↦ b·linear + offset`
//! with `linear[i][j] = tr(σ_j Φ(σ_i))/2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eigen4, pauli_basis, Complex, ComplexMatrix2, ComplexMatrix4, RealMatrix3,
};

pub const MAX_KRAUS_OPERATORS: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct KrausForm {
    pub operators: Vec<ComplexMatrix2>,
}

impl KrausForm {
    pub fn new(operators: Vec<ComplexMatrix2>) -> Result<Self> {
        if operators.is_empty() || operators.len() > MAX_KRAUS_OPERATORS {
            return Err(Error::PreconditionViolated(format!(
                "expected 1 to {MAX_KRAUS_OPERATORS} Kraus operators, got {}",
                operators.len()
            )));
        }
        if let Some(k) = operators.iter().position(|f| !f.is_finite()) {
            return Err(Error::NonFinite(format!("Kraus operator {k}")));
        }
        Ok(KrausForm { operators })
    }

    /// ‖Σ F*F − I‖_F
    pub fn completeness_defect(&self) -> f64 {
        self.operators
            .iter()
            .map(|f| f.adjoint() * *f)
            .sum::<ComplexMatrix2>()
            .distance(&ComplexMatrix2::identity())
    }
}

/// `A ↦ μ_I A + μ_X XAX + μ_Y YAY + μ_Z ZAZ`, coefficients in the order
/// (I, X, Y, Z).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliMixingForm {
    pub coefficients: [f64; 4],
}

impl PauliMixingForm {
    pub fn is_channel(&self, tol: f64) -> bool {
        self.coefficients.iter().all(|&m| m >= -tol)
            && (self.coefficients.iter().sum::<f64>() - 1.0).abs() <= tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChoiForm {
    pub matrix: ComplexMatrix4,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAffineForm {
    pub linear: RealMatrix3,
    pub offset: [f64; 3],
}

impl BlochAffineForm {
    pub fn is_unital(&self, tol: f64) -> bool {
        self.offset.iter().all(|x| x.abs() <= tol)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum QubitChannel {
    Kraus(KrausForm),
    Choi(ChoiForm),
    Pauli(PauliMixingForm),
    Bloch(BlochAffineForm),
}

/// Eigenvalues of a Choi matrix, descending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChoiSpectrum {
    pub lambdas: [f64; 4],
}

impl ChoiSpectrum {
    pub fn from_unsorted(mut lambdas: [f64; 4]) -> Self {
        lambdas.sort_by(|a, b| b.total_cmp(a));
        ChoiSpectrum { lambdas }
    }

    pub fn sum(&self) -> f64 {
        self.lambdas.iter().sum()
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.lambdas.iter().filter(|&&l| l > tol).count()
    }

    /// Largest entrywise difference.
    pub fn gap(&self, other: &ChoiSpectrum) -> f64 {
        self.lambdas
            .iter()
            .zip(other.lambdas)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// The Choi matrix `½[[λ1+λ2,0,0,λ1−λ2],[0,λ3+λ4,λ3−λ4,0],…]` of the
    /// canonical channel `½(λ1 A + λ2 ZAZ + λ3 XAX + λ4 YAY)`.
    pub fn canonical_choi(&self) -> ComplexMatrix4 {
        let [l1, l2, l3, l4] = self.lambdas;
        let mut m = ComplexMatrix4::zeros();
        let outer = 0.5 * (l1 + l2);
        let outer_off = 0.5 * (l1 - l2);
        let inner = 0.5 * (l3 + l4);
        let inner_off = 0.5 * (l3 - l4);
        m[(0, 0)] = c(outer, 0.0);
        m[(3, 3)] = c(outer, 0.0);
        m[(0, 3)] = c(outer_off, 0.0);
        m[(3, 0)] = c(outer_off, 0.0);
        m[(1, 1)] = c(inner, 0.0);
        m[(2, 2)] = c(inner, 0.0);
        m[(1, 2)] = c(inner_off, 0.0);
        m[(2, 1)] = c(inner_off, 0.0);
        m
    }
}

/// Diagnostic flags plus the numbers that decided them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationReport {
    pub hermitian_preserving: bool,
    pub trace_preserving: bool,
    pub unital: bool,
    pub completely_positive: bool,
    /// ‖C − C*‖_F
    pub hermitian_defect: f64,
    /// max |tr Φ(E_ij) − δ_ij| and the offending (i, j)
    pub trace_defect: f64,
    pub trace_witness: (usize, usize),
    /// ‖Φ(I) − I‖_F
    pub unital_defect: f64,
    /// Smallest Choi eigenvalue; absent when the Choi matrix is not Hermitian.
    pub min_choi_eigenvalue: Option<f64>,
}

impl ValidationReport {
    pub fn is_unital_channel(&self) -> bool {
        self.hermitian_preserving && self.trace_preserving && self.unital && self.completely_positive
    }
}

/// Largest Frobenius deviation between two maps over the inputs I, X, Y, Z.
pub fn pauli_basis_deviation(
    f: impl Fn(&ComplexMatrix2) -> ComplexMatrix2,
    g: impl Fn(&ComplexMatrix2) -> ComplexMatrix2,
) -> f64 {
    pauli_basis()
        .iter()
        .map(|p| f(p).distance(&g(p)))
        .fold(0.0, f64::max)
}

impl QubitChannel {
    pub fn identity() -> Self {
        QubitChannel::Pauli(PauliMixingForm {
            coefficients: [1.0, 0.0, 0.0, 0.0],
        })
    }

    /// `A ↦ ½ tr(A) I`
    pub fn depolarizing() -> Self {
        QubitChannel::pauli([0.25; 4])
    }

    pub fn pauli(coefficients: [f64; 4]) -> Self {
        QubitChannel::Pauli(PauliMixingForm { coefficients })
    }

    pub fn unitary(u: ComplexMatrix2) -> Self {
        QubitChannel::Kraus(KrausForm { operators: vec![u] })
    }

    /// Unital map with `Φ(X) = d1 X, Φ(Y) = d2 Y, Φ(Z) = d3 Z`.
    pub fn diagonal(d: [f64; 3]) -> Self {
        QubitChannel::Bloch(BlochAffineForm {
            linear: RealMatrix3::diag(d),
            offset: [0.0; 3],
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            QubitChannel::Kraus(_) => "kraus",
            QubitChannel::Choi(_) => "choi",
            QubitChannel::Pauli(_) => "pauli",
            QubitChannel::Bloch(_) => "bloch",
        }
    }

    pub fn apply(&self, a: &ComplexMatrix2) -> ComplexMatrix2 {
        match self {
            QubitChannel::Kraus(k) => k.operators.iter().map(|f| f.conjugate(a)).sum(),
            QubitChannel::Choi(ch) => {
                let mut out = ComplexMatrix2::zeros();
                for i in 0..2 {
                    for j in 0..2 {
                        out = out + ch.matrix.block(i, j).scale(a[(i, j)]);
                    }
                }
                out
            }
            QubitChannel::Pauli(p) => pauli_basis()
                .iter()
                .zip(p.coefficients)
                .map(|(s, mu)| s.conjugate(a).scale_re(mu))
                .sum(),
            QubitChannel::Bloch(b) => {
                let p = pauli_basis();
                // a = a0 I + Σ a_i σ_i with a_k = tr(σ_k a)/2
                let coef: [Complex; 4] = std::array::from_fn(|k| (p[k] * *a).trace() * 0.5);
                let mut out = p[0].scale(coef[0]);
                for (k, off) in b.offset.iter().enumerate() {
                    out = out + p[k + 1].scale(coef[0] * *off);
                }
                for i in 0..3 {
                    for j in 0..3 {
                        out = out + p[j + 1].scale(coef[i + 1] * b.linear[(i, j)]);
                    }
                }
                out
            }
        }
    }

    /// `Σ_ij E_ij ⊗ Φ(E_ij)` assembled from the action of the map.
    pub fn choi_from_action(&self) -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let out = self.apply(&ComplexMatrix2::unit(i, j));
                for a in 0..2 {
                    for b in 0..2 {
                        m[(2 * i + a, 2 * j + b)] = out[(a, b)];
                    }
                }
            }
        }
        m
    }

    pub fn to_choi(&self) -> ChoiForm {
        let matrix = match self {
            QubitChannel::Choi(ch) => ch.matrix,
            QubitChannel::Kraus(k) => k
                .operators
                .iter()
                .map(|f| ComplexMatrix4::outer(&f.vec_columns()))
                .sum(),
            _ => self.choi_from_action(),
        };
        ChoiForm { matrix }
    }

    /// Row-convention Bloch matrix and offset.
    pub fn to_bloch(&self) -> BlochAffineForm {
        let p = pauli_basis();
        let images: [ComplexMatrix2; 4] = std::array::from_fn(|k| self.apply(&p[k]));
        let linear =
            RealMatrix3::from_fn(|i, j| (p[j + 1] * images[i + 1]).trace().re / 2.0);
        let offset = std::array::from_fn(|i| (p[i + 1] * images[0]).trace().re / 2.0);
        BlochAffineForm { linear, offset }
    }

    pub fn choi_spectrum(&self, tol: f64) -> Result<ChoiSpectrum> {
        let eig = hermitian_eigen4(&self.to_choi().matrix, tol)?;
        Ok(ChoiSpectrum {
            lambdas: eig.eigenvalues,
        })
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        let choi = self.to_choi().matrix;
        let hermitian_defect = choi.hermitian_defect();
        let hermitian_preserving = hermitian_defect <= tol * choi.frobenius_norm().max(1.0);

        let mut trace_defect = 0.0;
        let mut trace_witness = (0, 0);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                let dev = (choi.block(i, j).trace() - c(want, 0.0)).norm();
                if dev > trace_defect {
                    trace_defect = dev;
                    trace_witness = (i, j);
                }
            }
        }
        let unital_defect = self
            .apply(&ComplexMatrix2::identity())
            .distance(&ComplexMatrix2::identity());

        let min_choi_eigenvalue = if hermitian_preserving {
            hermitian_eigen4(&choi, tol.max(hermitian_defect / choi.frobenius_norm().max(1e-300)))
                .ok()
                .map(|e| e.eigenvalues[3])
        } else {
            None
        };

        ValidationReport {
            hermitian_preserving,
            trace_preserving: trace_defect <= tol,
            unital: unital_defect <= tol,
            completely_positive: min_choi_eigenvalue.is_some_and(|m| m >= -tol),
            hermitian_defect,
            trace_defect,
            trace_witness,
            unital_defect,
            min_choi_eigenvalue,
        }
    }

    /// Checks the three structural preconditions shared by canonicalization
    /// and equivalence testing.
    pub fn require_unital_tp_hp(&self, tol: f64) -> Result<ValidationReport> {
        if let QubitChannel::Pauli(p) = self {
            if p.coefficients.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("Pauli coefficients".into()));
            }
        }
        let report = self.validate(tol);
        if !report.hermitian_preserving {
            return Err(Error::NotHermitianPreserving {
                defect: report.hermitian_defect,
            });
        }
        if !report.trace_preserving {
            return Err(Error::NotTracePreserving {
                defect: report.trace_defect,
            });
        }
        if !report.unital {
            return Err(Error::NotUnital {
                defect: report.unital_defect,
            });
        }
        Ok(report)
    }

    /// The map `A ↦ v Φ(u A u*) v*`.
    pub fn conjugate(&self, u: &ComplexMatrix2, v: &ComplexMatrix2) -> QubitChannel {
        match self {
            QubitChannel::Kraus(k) => QubitChannel::Kraus(KrausForm {
                operators: k.operators.iter().map(|f| *v * *f * *u).collect(),
            }),
            _ => {
                let conjugated = |a: &ComplexMatrix2| v.conjugate(&self.apply(&u.conjugate(a)));
                let mut m = ComplexMatrix4::zeros();
                for i in 0..2 {
                    for j in 0..2 {
                        let out = conjugated(&ComplexMatrix2::unit(i, j));
                        for a in 0..2 {
                            for b in 0..2 {
                                m[(2 * i + a, 2 * j + b)] = out[(a, b)];
                            }
                        }
                    }
                }
                QubitChannel::Choi(ChoiForm { matrix: m })
            }
        }
    }

    /// Largest deviation from `other` over the Pauli basis inputs.
    pub fn deviation(&self, other: &QubitChannel) -> f64 {
        pauli_basis_deviation(|a| self.apply(a), |a| other.apply(a))
    }
}

/// Kraus operators from the scaled eigenvectors of a PSD Choi matrix.
pub fn from_choi(choi: &ChoiForm, tol: f64) -> Result<KrausForm> {
    let eig = hermitian_eigen4(&choi.matrix, tol)?;
    let min = eig.eigenvalues[3];
    if min < -tol {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let mut operators = Vec::new();
    for k in 0..4 {
        let lambda = eig.eigenvalues[k];
        if lambda <= tol {
            continue;
        }
        let s = lambda.sqrt();
        let v = eig.eigenvector(k);
        // v stacks columns: F[a][i] = v[2i + a]
        operators.push(ComplexMatrix2::from_fn(|a, i| v[2 * i + a] * s));
    }
    if operators.is_empty() {
        operators.push(ComplexMatrix2::zeros());
    }
    Ok(KrausForm { operators })
}

/// ChaCha20 keyed by `seed`, with `stream` selecting an independent
/// substream. Counter-based, so substreams never overlap.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Haar-random element of SU(2) from a normalized Gaussian quaternion.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix2 {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < 1e-12 {
            continue;
        }
        let [a, b, cc, d] = q.map(|x| x / n);
        return ComplexMatrix2::new(c(a, b), c(cc, d), c(-cc, d), c(a, -b));
    }
}

pub fn random_unitary(seed: u64) -> ComplexMatrix2 {
    haar_unitary(&mut seeded_rng(seed, 0))
}

/// Point drawn uniformly from `{λ ≥ 0, Σλ = total}`.
pub fn uniform_simplex<R: Rng + ?Sized>(rng: &mut R, total: f64) -> [f64; 4] {
    let e: [f64; 4] = std::array::from_fn(|_| rng.sample(Exp1));
    let s: f64 = e.iter().sum();
    e.map(|x| total * x / s)
}

/// `A ↦ V Φ(U A U*) V*` for the Pauli channel with a uniformly sampled Choi
/// spectrum and independent Haar unitaries `U`, `V`.
pub fn random_unital_channel(seed: u64) -> QubitChannel {
    let lambdas = uniform_simplex(&mut seeded_rng(seed, 1), 2.0);
    let u = haar_unitary(&mut seeded_rng(seed, 2));
    let v = haar_unitary(&mut seeded_rng(seed, 3));
    channel_with_spectrum(lambdas, &u, &v)
}

/// Kraus form of `A ↦ V Ψ(U A U*) V*` where Ψ is the Pauli channel with
/// coefficients `lambdas / 2` in the order (I, X, Y, Z). Entries of
/// `lambdas` must be non-negative.
pub fn channel_with_spectrum(
    lambdas: [f64; 4],
    u: &ComplexMatrix2,
    v: &ComplexMatrix2,
) -> QubitChannel {
    let p = pauli_basis();
    let operators = p
        .iter()
        .zip(lambdas)
        .map(|(s, l)| (*v * *s * *u).scale_re((0.5 * l.max(0.0)).sqrt()))
        .collect();
    QubitChannel::Kraus(KrausForm { operators })
}

/// Hermitian 2×2 density-like matrix `½(I + x X + y Y + z Z)`.
pub fn bloch_state(r: [f64; 3]) -> ComplexMatrix2 {
    let p = pauli_basis();
    let mut m = p[0];
    for k in 0..3 {
        m = m + p[k + 1].scale_re(r[k]);
    }
    m.scale_re(0.5)
}
