//! Local-unitary canonical form of unital, trace-preserving,
//! Hermitian-preserving qubit maps.
//!
//! Every such map Φ has unitaries `u`, `v` with
//! `v Φ(u A u*) v* = ½(λ1 A + λ2 ZAZ + λ3 XAX + λ4 YAY)` where
//! `λ1 ≥ λ2 ≥ λ3 ≥ λ4` are the Choi eigenvalues. The construction here goes
//! through the Bloch matrix: a signed SVD gives two rotations, the rotations
//! are lifted to SU(2), and Pauli permutation gadgets put the coefficients
//! into descending order.

use std::collections::VecDeque;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::bloch::{spectrum_from_scaling, BlochScaling};
use crate::channel::{pauli_basis_deviation, ChoiSpectrum, PauliMixingForm, QubitChannel};
use crate::error::{Error, Result};
use crate::linalg::{c, pauli_basis, su2_from_so3, svd3, ComplexMatrix2, RealMatrix3};

/// Slots of a Pauli coefficient vector.
pub const SLOT_I: usize = 0;
pub const SLOT_X: usize = 1;
pub const SLOT_Y: usize = 2;
pub const SLOT_Z: usize = 3;

/// Absolute per-entry tolerance when comparing Choi spectra.
pub const SPECTRUM_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct Canonicalization {
    /// Input-side unitary.
    pub u: ComplexMatrix2,
    /// Output-side unitary.
    pub v: ComplexMatrix2,
    pub spectrum: ChoiSpectrum,
    /// Pauli mixing form with `μ_I = λ1/2, μ_Z = λ2/2, μ_X = λ3/2, μ_Y = λ4/2`.
    pub canonical: QubitChannel,
    /// The signed Bloch scaling found by the SVD, before sorting.
    pub scaling: BlochScaling,
    /// Max of the witness residual over the Pauli basis and the entrywise
    /// deviation of the canonical Choi matrix from its template.
    pub residual: f64,
}

impl Canonicalization {
    /// `A ↦ v Φ(u A u*) v*` compared against the canonical channel.
    pub fn witness_residual(&self, ch: &QubitChannel) -> f64 {
        pauli_basis_deviation(
            |a| self.v.conjugate(&ch.apply(&self.u.conjugate(a))),
            |a| self.canonical.apply(a),
        )
    }
}

/// Coefficients of the canonical channel in (I, X, Y, Z) order.
pub fn canonical_coefficients(spectrum: &ChoiSpectrum) -> [f64; 4] {
    let [l1, l2, l3, l4] = spectrum.lambdas;
    let mut mu = [0.0; 4];
    mu[SLOT_I] = 0.5 * l1;
    mu[SLOT_Z] = 0.5 * l2;
    mu[SLOT_X] = 0.5 * l3;
    mu[SLOT_Y] = 0.5 * l4;
    mu
}

/// Largest entrywise deviation of a Choi matrix from the canonical template.
pub fn template_deviation(ch: &QubitChannel, spectrum: &ChoiSpectrum) -> f64 {
    let diff = ch.to_choi().matrix - spectrum.canonical_choi();
    diff.max_abs()
}

pub fn canonicalize(ch: &QubitChannel, tol: f64) -> Result<Canonicalization> {
    ch.require_unital_tp_hp(tol)?;
    let t = ch.to_bloch().linear;

    let svd = svd3(&t);
    let mut left = svd.left;
    let mut right = svd.right;
    let mut d = svd.values;
    // Signs go onto the smallest axis so both frames become rotations.
    if left.det() < 0.0 {
        negate_column(&mut left, 2);
        d[2] = -d[2];
    }
    if right.det() < 0.0 {
        negate_column(&mut right, 2);
        d[2] = -d[2];
    }
    // T = L·D·Rᵗ, so the row-convention composition Lᵗ·T·R is diagonal.
    let frame_tol = tol.max(1e-12);
    let u0 = su2_from_so3(&left.transpose(), frame_tol)?;
    let v0 = su2_from_so3(&right, frame_tol)?;

    let scaling = BlochScaling { d };
    let by_role = spectrum_from_scaling(&scaling);
    let mut order = [SLOT_I, SLOT_Z, SLOT_X, SLOT_Y];
    order.sort_by(|&a, &b| by_role[b].total_cmp(&by_role[a]));
    let mut perm = [0usize; 4];
    perm[SLOT_I] = order[0];
    perm[SLOT_Z] = order[1];
    perm[SLOT_X] = order[2];
    perm[SLOT_Y] = order[3];

    let diagonal = PauliMixingForm {
        coefficients: by_role.map(|l| 0.5 * l),
    };
    let gadget = pauli_permute(&diagonal, perm);
    let spectrum = ChoiSpectrum {
        lambdas: order.map(|k| by_role[k]),
    };
    let canonical = QubitChannel::pauli(canonical_coefficients(&spectrum));

    let (u, v) = normalize_witness(u0 * gadget.gadget_in, gadget.gadget_out * v0);
    let mut result = Canonicalization {
        u,
        v,
        spectrum,
        canonical,
        scaling,
        residual: 0.0,
    };
    let residual = result
        .witness_residual(ch)
        .max(template_deviation(&result.canonical, &spectrum));
    result.residual = residual;
    if residual.is_nan() || residual > tol {
        return Err(Error::ResidualExceeded { residual, tol });
    }
    Ok(result)
}

fn negate_column(m: &mut RealMatrix3, j: usize) {
    for i in 0..3 {
        m[(i, j)] = -m[(i, j)];
    }
}

/// Canonical channels commute with Pauli conjugation, so `(u P, P v)` is a
/// witness whenever `(u, v)` is. Pick the Pauli that brings `u` closest to
/// the identity, then strip the global phase of each factor.
fn normalize_witness(u: ComplexMatrix2, v: ComplexMatrix2) -> (ComplexMatrix2, ComplexMatrix2) {
    let p = pauli_basis();
    let best = (0..4)
        .max_by(|&a, &b| {
            let ta = (u * p[a]).trace().norm();
            let tb = (u * p[b]).trace().norm();
            ta.total_cmp(&tb).then(b.cmp(&a))
        })
        .unwrap_or(0);
    let u = u * p[best];
    let v = p[best] * v;
    (strip_phase(u), strip_phase(v))
}

/// Multiply by a unit scalar so the trace is real and non-negative (or, for
/// traceless matrices, the first nonzero entry is).
fn strip_phase(m: ComplexMatrix2) -> ComplexMatrix2 {
    let tr = m.trace();
    let pivot = if tr.norm() > 1e-12 {
        tr
    } else {
        m.0.iter()
            .flatten()
            .copied()
            .find(|z| z.norm() > 1e-12)
            .unwrap_or(c(1.0, 0.0))
    };
    m.scale(pivot.conj() / pivot.norm())
}

/// A composite Pauli permutation gadget.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliPermutation {
    pub gadget_in: ComplexMatrix2,
    pub gadget_out: ComplexMatrix2,
    pub result: PauliMixingForm,
    /// Generator indices applied in order (0: H both sides, 1: H1 both sides,
    /// 2: Z on the output, 3: H1 on the input and Z·H1 on the output).
    pub generators: Vec<usize>,
}

struct Generator {
    gadget_in: ComplexMatrix2,
    gadget_out: ComplexMatrix2,
    /// result[s] = input[slots[s]]
    slots: [usize; 4],
}

fn generators() -> [Generator; 4] {
    let [id, x, y, z] = pauli_basis();
    let h = (x + z).scale_re(FRAC_1_SQRT_2);
    let h1 = (x + y).scale_re(FRAC_1_SQRT_2);
    [
        // H·Ψ(H A H)·H exchanges the X and Z coefficients
        Generator {
            gadget_in: h,
            gadget_out: h,
            slots: [SLOT_I, SLOT_Z, SLOT_Y, SLOT_X],
        },
        // H1·Ψ(H1 A H1)·H1 exchanges X and Y
        Generator {
            gadget_in: h1,
            gadget_out: h1,
            slots: [SLOT_I, SLOT_Y, SLOT_X, SLOT_Z],
        },
        // Z·Ψ(A)·Z exchanges I with Z and X with Y
        Generator {
            gadget_in: id,
            gadget_out: z,
            slots: [SLOT_Z, SLOT_Y, SLOT_X, SLOT_I],
        },
        // Z·H1·Ψ(H1 A H1)·H1·Z exchanges I and Z
        Generator {
            gadget_in: h1,
            gadget_out: z * h1,
            slots: [SLOT_Z, SLOT_X, SLOT_Y, SLOT_I],
        },
    ]
}

/// Permute Pauli coefficients with local unitary gadgets:
/// `result.coefficients[s] = ch.coefficients[perm[s]]` and
/// `result(A) = gadget_out · ch(gadget_in A gadget_in*) · gadget_out*`.
///
/// Uses a shortest word in the gadget generators.
///
/// Panics if `perm` is not a permutation of 0..4.
pub fn pauli_permute(ch: &PauliMixingForm, perm: [usize; 4]) -> PauliPermutation {
    let mut seen = [false; 4];
    for &p in &perm {
        assert!(p < 4 && !seen[p], "not a permutation: {perm:?}");
        seen[p] = true;
    }
    let gens = generators();
    let start = [0usize, 1, 2, 3];
    let mut visited: Vec<([usize; 4], Vec<usize>)> = vec![(start, Vec::new())];
    let mut queue = VecDeque::from([(start, Vec::<usize>::new())]);
    let mut word = None;
    while let Some((arr, w)) = queue.pop_front() {
        if arr == perm {
            word = Some(w);
            break;
        }
        for (gi, g) in gens.iter().enumerate() {
            let next: [usize; 4] = std::array::from_fn(|s| arr[g.slots[s]]);
            if visited.iter().all(|(a, _)| *a != next) {
                let mut nw = w.clone();
                nw.push(gi);
                visited.push((next, nw.clone()));
                queue.push_back((next, nw));
            }
        }
    }
    let word = word.expect("the gadget generators span all of S4");

    let mut gadget_in = ComplexMatrix2::identity();
    let mut gadget_out = ComplexMatrix2::identity();
    for &gi in &word {
        gadget_in = gadget_in * gens[gi].gadget_in;
        gadget_out = gens[gi].gadget_out * gadget_out;
    }
    PauliPermutation {
        gadget_in,
        gadget_out,
        result: PauliMixingForm {
            coefficients: perm.map(|k| ch.coefficients[k]),
        },
        generators: word,
    }
}

/// Outcome of a local unitary equivalence test.
#[derive(Clone, Debug, PartialEq)]
pub enum Equivalence {
    /// `b(A) = v · a(u A u*) · v*`.
    Equivalent {
        u: ComplexMatrix2,
        v: ComplexMatrix2,
        residual: f64,
        spectrum: ChoiSpectrum,
    },
    NotEquivalent {
        gap: f64,
        spectrum_a: ChoiSpectrum,
        spectrum_b: ChoiSpectrum,
    },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

pub fn unitarily_equivalent(a: &QubitChannel, b: &QubitChannel, tol: f64) -> Result<Equivalence> {
    unitarily_equivalent_with(a, b, tol, SPECTRUM_TOL)
}

/// As [`unitarily_equivalent`] with an explicit spectrum tolerance.
pub fn unitarily_equivalent_with(
    a: &QubitChannel,
    b: &QubitChannel,
    tol: f64,
    spectrum_tol: f64,
) -> Result<Equivalence> {
    let ca = canonicalize(a, tol)?;
    let cb = canonicalize(b, tol)?;
    let gap = ca.spectrum.gap(&cb.spectrum);
    if gap > spectrum_tol {
        return Ok(Equivalence::NotEquivalent {
            gap,
            spectrum_a: ca.spectrum,
            spectrum_b: cb.spectrum,
        });
    }
    // v_a a(u_a · u_a*) v_a* = canonical = v_b b(u_b · u_b*) v_b*
    let u = ca.u * cb.u.adjoint();
    let v = cb.v.adjoint() * ca.v;
    let residual = pauli_basis_deviation(|x| b.apply(x), |x| v.conjugate(&a.apply(&u.conjugate(x))));
    Ok(Equivalence::Equivalent {
        u,
        v,
        residual,
        spectrum: cb.spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{random_unital_channel, random_unitary};
    use crate::linalg::DEFAULT_TOL;

    fn close_to_identity_up_to_phase(m: &ComplexMatrix2) -> bool {
        (m.trace().norm() - 2.0).abs() < 1e-10 && m.is_unitary(1e-10)
    }

    #[test]
    fn fixed_point_has_trivial_witnesses() {
        // μ_I ≥ μ_Z ≥ μ_X ≥ μ_Y
        let ch = QubitChannel::pauli([0.4, 0.2, 0.1, 0.3]);
        let can = canonicalize(&ch, DEFAULT_TOL).unwrap();
        assert!(close_to_identity_up_to_phase(&can.u), "{:?}", can.u);
        assert!(close_to_identity_up_to_phase(&can.v), "{:?}", can.v);
        assert!(can.canonical.deviation(&ch) < 1e-12);
        let want = [0.8, 0.6, 0.4, 0.2];
        for (g, w) in can.spectrum.lambdas.iter().zip(want) {
            assert!((g - w).abs() < 1e-14);
        }
    }

    #[test]
    fn unitary_channels_canonicalize_to_the_identity() {
        let w = random_unitary(42);
        let ch = QubitChannel::unitary(w);
        let can = canonicalize(&ch, DEFAULT_TOL).unwrap();
        assert!((can.spectrum.lambdas[0] - 2.0).abs() < 1e-12);
        assert!(can.canonical.deviation(&QubitChannel::identity()) < 1e-12);
        assert!(can.witness_residual(&ch) < 1e-12);
    }

    #[test]
    fn random_channels_meet_the_residual_bound() {
        for seed in 0..25 {
            let ch = random_unital_channel(seed);
            let can = canonicalize(&ch, DEFAULT_TOL).unwrap();
            assert!(can.residual <= 1e-8, "seed {seed}: {}", can.residual);
            let direct = ch.choi_spectrum(DEFAULT_TOL).unwrap();
            assert!(direct.gap(&can.spectrum) < 1e-9);
        }
    }

    #[test]
    fn depolarizing_uses_identity_frames() {
        let can = canonicalize(&QubitChannel::depolarizing(), DEFAULT_TOL).unwrap();
        assert_eq!(can.u, ComplexMatrix2::identity());
        assert_eq!(can.v, ComplexMatrix2::identity());
    }

    #[test]
    fn non_cp_maps_are_canonicalized_too() {
        let ch = QubitChannel::diagonal([1.0, 1.0, 0.0]);
        let can = canonicalize(&ch, DEFAULT_TOL).unwrap();
        let want = [1.5, 0.5, 0.5, -0.5];
        for (g, w) in can.spectrum.lambdas.iter().zip(want) {
            assert!((g - w).abs() < 1e-14);
        }
        assert!(can.residual < 1e-12);
    }

    #[test]
    fn structural_errors() {
        let not_unital = QubitChannel::Bloch(crate::channel::BlochAffineForm {
            linear: RealMatrix3::diag([0.5, 0.5, 0.5]),
            offset: [0.0, 0.0, 0.3],
        });
        assert!(matches!(canonicalize(&not_unital, DEFAULT_TOL), Err(Error::NotUnital { .. })));

        let not_tp = QubitChannel::pauli([0.5, 0.2, 0.2, 0.2]);
        assert!(matches!(
            canonicalize(&not_tp, DEFAULT_TOL),
            Err(Error::NotTracePreserving { .. })
        ));

        let mut m = QubitChannel::identity().to_choi().matrix;
        m[(0, 3)] = c(1.0, 0.5);
        let not_hp = QubitChannel::Choi(crate::channel::ChoiForm { matrix: m });
        assert!(matches!(
            canonicalize(&not_hp, DEFAULT_TOL),
            Err(Error::NotHermitianPreserving { .. })
        ));
    }

    #[test]
    fn identity_permutation_uses_no_gadgets() {
        let p = PauliMixingForm { coefficients: [0.1, 0.2, 0.3, 0.4] };
        let r = pauli_permute(&p, [0, 1, 2, 3]);
        assert_eq!(r.gadget_in, ComplexMatrix2::identity());
        assert_eq!(r.gadget_out, ComplexMatrix2::identity());
        assert!(r.generators.is_empty());
    }

    #[test]
    fn x_z_transposition_is_hadamard_on_both_sides() {
        let p = PauliMixingForm { coefficients: [0.1, 0.2, 0.3, 0.4] };
        let r = pauli_permute(&p, [SLOT_I, SLOT_Z, SLOT_Y, SLOT_X]);
        assert_eq!(r.generators, vec![0]);
        assert_eq!(r.result.coefficients, [0.1, 0.4, 0.3, 0.2]);
        let [_, x, _, z] = pauli_basis();
        let h = (x + z).scale_re(FRAC_1_SQRT_2);
        assert_eq!(r.gadget_in, h);
        assert_eq!(r.gadget_out, h);
    }

    fn check_gadget(p: &PauliMixingForm, r: &PauliPermutation) {
        let src = QubitChannel::Pauli(*p);
        let res = QubitChannel::Pauli(r.result);
        let dev = pauli_basis_deviation(
            |a| res.apply(a),
            |a| r.gadget_out.conjugate(&src.apply(&r.gadget_in.conjugate(a))),
        );
        assert!(dev < 1e-14, "{:?} {dev}", r.generators);
    }

    #[test]
    fn four_cycle_along_the_slot_path_needs_at_most_three_gadgets() {
        // cycle I → Z → X → Y → I in the canonical slot order
        let p = PauliMixingForm { coefficients: [0.1, 0.2, 0.3, 0.4] };
        let mut perm = [0; 4];
        perm[SLOT_I] = SLOT_Z;
        perm[SLOT_Z] = SLOT_X;
        perm[SLOT_X] = SLOT_Y;
        perm[SLOT_Y] = SLOT_I;
        let r = pauli_permute(&p, perm);
        assert!(r.generators.len() <= 3);
        check_gadget(&p, &r);
    }

    #[test]
    fn every_permutation_is_realized() {
        let p = PauliMixingForm { coefficients: [0.1, 0.2, 0.3, 0.4] };
        let mut count = 0;
        for a in 0..4 {
            for b in 0..4 {
                for cc in 0..4 {
                    for d in 0..4 {
                        let perm = [a, b, cc, d];
                        let mut s = perm;
                        s.sort();
                        if s != [0, 1, 2, 3] {
                            continue;
                        }
                        count += 1;
                        let r = pauli_permute(&p, perm);
                        check_gadget(&p, &r);
                        // inverse restores the original exactly
                        let mut inv = [0; 4];
                        for (i, &x) in perm.iter().enumerate() {
                            inv[x] = i;
                        }
                        let back = pauli_permute(&r.result, inv);
                        assert_eq!(back.result.coefficients, p.coefficients);
                    }
                }
            }
        }
        assert_eq!(count, 24);
    }

    #[test]
    fn permuted_pauli_coefficients_are_equivalent() {
        let a = QubitChannel::pauli([0.4, 0.3, 0.2, 0.1]);
        let b = QubitChannel::pauli([0.1, 0.2, 0.3, 0.4]);
        let e = unitarily_equivalent(&a, &b, DEFAULT_TOL).unwrap();
        match e {
            Equivalence::Equivalent { residual, .. } => assert!(residual < 1e-12),
            _ => panic!("expected equivalence"),
        }
        let c2 = QubitChannel::pauli([0.4, 0.3, 0.25, 0.05]);
        match unitarily_equivalent(&a, &c2, DEFAULT_TOL).unwrap() {
            Equivalence::NotEquivalent { gap, .. } => assert!((gap - 0.1).abs() < 1e-12),
            _ => panic!("expected rejection"),
        }
    }

    #[test]
    fn conjugated_channels_are_equivalent() {
        for seed in 0..10 {
            let phi = random_unital_channel(seed);
            let u = random_unitary(1000 + seed);
            let v = random_unitary(2000 + seed);
            let psi = phi.conjugate(&u, &v);
            match unitarily_equivalent(&phi, &psi, DEFAULT_TOL).unwrap() {
                Equivalence::Equivalent { residual, .. } => assert!(residual < 1e-8),
                e => panic!("seed {seed}: {e:?}"),
            }
        }
    }
}
