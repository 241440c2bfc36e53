//! Bloch-ball geometry of diagonal unital maps `Φ(X) = d1 X, Φ(Y) = d2 Y,
//! Φ(Z) = d3 Z`: the correspondence with Choi eigenvalues, the CPTP
//! tetrahedron and the ordered cone.

use crate::channel::{ChoiSpectrum, PauliMixingForm};
use crate::error::{Error, Result};
use crate::linalg::RealMatrix3;

/// Signed semi-axes of the image ellipsoid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochScaling {
    pub d: [f64; 3],
}

impl BlochScaling {
    pub fn new(d1: f64, d2: f64, d3: f64) -> Self {
        BlochScaling { d: [d1, d2, d3] }
    }

    pub fn product(&self) -> f64 {
        self.d[0] * self.d[1] * self.d[2]
    }

    pub fn sorted_abs(&self) -> [f64; 3] {
        let mut a = self.d.map(f64::abs);
        a.sort_by(|x, y| y.total_cmp(x));
        a
    }

    /// Row vector times matrix.
    pub fn transform(&self, q: &RealMatrix3) -> BlochScaling {
        BlochScaling {
            d: std::array::from_fn(|j| (0..3).map(|i| self.d[i] * q[(i, j)]).sum()),
        }
    }

    /// Equivalent scaling with `d1 ≥ d2 ≥ |d3|`: sorted magnitudes, with the
    /// sign of the product carried by the last entry.
    pub fn ordered_representative(&self) -> BlochScaling {
        let [a, b, c] = self.sorted_abs();
        let negative = self.d.iter().filter(|x| **x < 0.0).count() % 2 == 1;
        BlochScaling {
            d: [a, b, if negative { -c } else { c }],
        }
    }
}

/// The vertices (1,1,1), (1,−1,−1), (−1,1,−1), (−1,−1,1).
pub const TETRAHEDRON: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
];

/// Barycentric coordinates relative to [`TETRAHEDRON`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TetraCoordinates {
    pub barycentric: [f64; 4],
}

impl TetraCoordinates {
    pub fn point(&self) -> [f64; 3] {
        std::array::from_fn(|j| {
            (0..4)
                .map(|k| self.barycentric[k] * TETRAHEDRON[k][j])
                .sum()
        })
    }
}

/// `d` from eigenvalues given in Pauli role order (I, X, Y, Z):
/// `d1 = (λ_I + λ_X − λ_Y − λ_Z)/2` and cyclically.
pub fn scaling_from_lambdas(l: &[f64; 4]) -> BlochScaling {
    BlochScaling {
        d: [
            0.5 * (l[0] + l[1] - l[2] - l[3]),
            0.5 * (l[0] - l[1] + l[2] - l[3]),
            0.5 * (l[0] - l[1] - l[2] + l[3]),
        ],
    }
}

/// Scaling of the Pauli mixing map `½(λ1 A + λ2 XAX + λ3 YAY + λ4 ZAZ)`.
pub fn scaling_from_spectrum(s: &ChoiSpectrum) -> BlochScaling {
    scaling_from_lambdas(&s.lambdas)
}

/// Choi eigenvalues of the diagonal map, in Pauli role order (I, X, Y, Z):
/// `½(1+d1+d2+d3), ½(1+d1−d2−d3), ½(1−d1+d2−d3), ½(1−d1−d2+d3)`.
pub fn spectrum_from_scaling(s: &BlochScaling) -> [f64; 4] {
    channel_witness(s).map(|x| 0.5 * x)
}

/// The Pauli mixing form of the diagonal map.
pub fn pauli_form(s: &BlochScaling) -> PauliMixingForm {
    PauliMixingForm {
        coefficients: channel_witness(s).map(|x| 0.25 * x),
    }
}

fn channel_witness(s: &BlochScaling) -> [f64; 4] {
    let [d1, d2, d3] = s.d;
    [
        1.0 + d1 + d2 + d3,
        1.0 + d1 - d2 - d3,
        1.0 - d1 + d2 - d3,
        1.0 - d1 - d2 + d3,
    ]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingCheck {
    pub accepted: bool,
    /// `(1+d1+d2+d3, 1+d1−d2−d3, 1−d1+d2−d3, 1−d1−d2+d3)`
    pub witness: [f64; 4],
}

pub fn is_channel_scaling(s: &BlochScaling, tol: f64) -> ScalingCheck {
    let witness = channel_witness(s);
    ScalingCheck {
        accepted: witness.iter().all(|&w| w >= -tol),
        witness,
    }
}

pub fn tetra_coordinates(s: &BlochScaling, tol: f64) -> Result<TetraCoordinates> {
    let check = is_channel_scaling(s, tol);
    if !check.accepted {
        return Err(Error::NotInTetrahedron {
            witness: check.witness,
        });
    }
    Ok(TetraCoordinates {
        barycentric: check.witness.map(|w| 0.25 * w),
    })
}

fn require_ordered(s: &BlochScaling, tol: f64) -> Result<()> {
    let [d1, d2, d3] = s.d;
    if d1 + tol >= d2 && d2 + tol >= d3.abs() {
        Ok(())
    } else {
        Err(Error::OrderingViolated { d: s.d })
    }
}

/// For `d1 ≥ d2 ≥ |d3|`: the map is a channel iff `1 + d3 ≥ d1 + d2`.
pub fn ordered_cone_test(s: &BlochScaling, tol: f64) -> Result<bool> {
    require_ordered(s, tol)?;
    let [d1, d2, d3] = s.d;
    Ok(1.0 + d3 >= d1 + d2 - tol)
}

/// Generators of the ordered cone, in the order used by
/// [`ConeDecomposition::coefficients`].
pub const CONE_GENERATORS: [[f64; 3]; 4] = [
    [0.0, 0.0, 0.0],
    [1.0, 1.0, 1.0],
    [1.0, 0.0, 0.0],
    [1.0 / 3.0, 1.0 / 3.0, -1.0 / 3.0],
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeDecomposition {
    pub coefficients: [f64; 4],
    /// `A ↦ ½ tr(A) I`, `A ↦ A`, `A ↦ ½(A + XAX)`, `A ↦ ⅓(A + XAX + YAY)`.
    pub channels: [PauliMixingForm; 4],
}

impl ConeDecomposition {
    pub fn point(&self) -> [f64; 3] {
        std::array::from_fn(|j| {
            (0..4)
                .map(|k| self.coefficients[k] * CONE_GENERATORS[k][j])
                .sum()
        })
    }
}

pub fn cone_channels() -> [PauliMixingForm; 4] {
    let third = 1.0 / 3.0;
    [
        PauliMixingForm { coefficients: [0.25; 4] },
        PauliMixingForm { coefficients: [1.0, 0.0, 0.0, 0.0] },
        PauliMixingForm { coefficients: [0.5, 0.5, 0.0, 0.0] },
        PauliMixingForm { coefficients: [third, third, third, 0.0] },
    ]
}

pub fn ordered_cone_decomposition(s: &BlochScaling, tol: f64) -> Result<ConeDecomposition> {
    require_ordered(s, tol)?;
    let [d1, d2, d3] = s.d;
    // c1 (1,1,1) + c2 (1,0,0) + c3 (1,1,−1)/3 = d, remainder on the origin
    let identity = 0.5 * (d2 + d3);
    let flatten = d1 - d2;
    let reflect = 1.5 * (d2 - d3);
    let origin = 1.0 - identity - flatten - reflect;
    if origin < -tol {
        return Err(Error::NotInCone { slack: origin });
    }
    let mut coefficients = [origin, identity, flatten, reflect].map(|x| x.max(0.0));
    let total: f64 = coefficients.iter().sum();
    if total > 0.0 {
        coefficients = coefficients.map(|x| x / total);
    }
    Ok(ConeDecomposition {
        coefficients,
        channels: cone_channels(),
    })
}

/// Local unitary equivalence of two diagonal maps: same multiset of |d_i|
/// and the same product.
pub fn scaling_equivalent(a: &BlochScaling, b: &BlochScaling, tol: f64) -> bool {
    let sa = a.sorted_abs();
    let sb = b.sorted_abs();
    sa.iter().zip(sb).all(|(x, y)| (x - y).abs() <= tol) && (a.product() - b.product()).abs() <= tol
}

/// The 24 matrices `P·S` with `P` a permutation and `S` a diagonal sign
/// matrix of determinant 1. Acting on row vectors they preserve both the
/// multiset of |d_i| and the product d1 d2 d3.
pub fn scaling_symmetries() -> Vec<RealMatrix3> {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut out = Vec::with_capacity(24);
    for p in PERMS {
        for signs in 0..8u8 {
            let s: [f64; 3] = std::array::from_fn(|k| if signs >> k & 1 == 1 { -1.0 } else { 1.0 });
            if s.iter().product::<f64>() > 0.0 {
                out.push(RealMatrix3::from_fn(|i, j| if p[i] == j { s[i] } else { 0.0 }));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close3(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn scaling_from_reference_spectra() {
        let s = |l| scaling_from_spectrum(&ChoiSpectrum { lambdas: l }).d;
        assert_eq!(s([2.0, 0.0, 0.0, 0.0]), [1.0, 1.0, 1.0]);
        assert_eq!(s([0.5; 4]), [0.0, 0.0, 0.0]);
        assert!(close3(s([1.0, 0.5, 0.3, 0.2]), [0.5, 0.3, 0.2], 1e-15));
    }

    #[test]
    fn spectrum_from_reference_scalings() {
        assert_eq!(spectrum_from_scaling(&BlochScaling::new(1.0, 1.0, 1.0)), [2.0, 0.0, 0.0, 0.0]);
        assert_eq!(spectrum_from_scaling(&BlochScaling::new(0.0, 0.0, 0.0)), [0.5; 4]);
        let mut l = spectrum_from_scaling(&BlochScaling::new(1.0, 1.0, 0.0));
        l.sort_by(|a, b| b.total_cmp(a));
        assert_eq!(l, [1.5, 0.5, 0.5, -0.5]);
    }

    #[test]
    fn reflection_is_rejected_and_gamma_threshold_is_one_third() {
        assert!(!is_channel_scaling(&BlochScaling::new(1.0, 1.0, -1.0), 1e-9).accepted);
        let g = |gamma: f64| is_channel_scaling(&BlochScaling::new(gamma, gamma, -gamma), 1e-9).accepted;
        assert!(g(0.0));
        assert!(g(1.0 / 3.0));
        assert!(!g(1.0 / 3.0 + 1e-6));
    }

    #[test]
    fn vertices_have_one_active_witness() {
        for v in TETRAHEDRON {
            let c = is_channel_scaling(&BlochScaling { d: v }, 1e-12);
            assert!(c.accepted);
            let mut w = c.witness;
            w.sort_by(|a, b| b.total_cmp(a));
            assert_eq!(w, [4.0, 0.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn tetra_coordinates_examples() {
        let t = tetra_coordinates(&BlochScaling::new(0.0, 0.0, 0.0), 1e-9).unwrap();
        assert_eq!(t.barycentric, [0.25; 4]);
        let t = tetra_coordinates(&BlochScaling::new(1.0, -1.0, -1.0), 1e-9).unwrap();
        assert_eq!(t.barycentric, [0.0, 1.0, 0.0, 0.0]);
        let t = tetra_coordinates(&BlochScaling::new(0.5, 0.3, 0.2), 1e-9).unwrap();
        assert!((t.barycentric.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(t.barycentric.iter().all(|&x| x >= 0.0));
        assert!(close3(t.point(), [0.5, 0.3, 0.2], 1e-15));
        assert!(matches!(
            tetra_coordinates(&BlochScaling::new(1.0, 1.0, 0.0), 1e-9),
            Err(Error::NotInTetrahedron { .. })
        ));
    }

    #[test]
    fn ordered_cone_examples() {
        assert!(ordered_cone_test(&BlochScaling::new(1.0, 1.0, 1.0), 1e-9).unwrap());
        let third = 1.0 / 3.0;
        assert!(ordered_cone_test(&BlochScaling::new(third, third, -third), 1e-9).unwrap());
        assert!(!ordered_cone_test(&BlochScaling::new(1.0, 1.0, 0.0), 1e-9).unwrap());
        assert!(matches!(
            ordered_cone_test(&BlochScaling::new(0.1, 0.5, 0.0), 1e-9),
            Err(Error::OrderingViolated { .. })
        ));
    }

    #[test]
    fn cone_decomposition_examples() {
        let dec = ordered_cone_decomposition(&BlochScaling::new(1.0, 0.0, 0.0), 1e-9).unwrap();
        assert_eq!(dec.coefficients, [0.0, 0.0, 1.0, 0.0]);
        assert_eq!(dec.channels[2].coefficients, [0.5, 0.5, 0.0, 0.0]);

        let dec = ordered_cone_decomposition(&BlochScaling::new(0.0, 0.0, 0.0), 1e-9).unwrap();
        assert_eq!(dec.coefficients, [1.0, 0.0, 0.0, 0.0]);

        let dec = ordered_cone_decomposition(&BlochScaling::new(0.6, 0.4, 0.1), 1e-9).unwrap();
        // solved by hand: c_id = .25, c_x = .2, c_refl = .45, c_0 = .1
        let want = [0.1, 0.25, 0.2, 0.45];
        assert!(dec.coefficients.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(close3(dec.point(), [0.6, 0.4, 0.1], 1e-12));

        assert!(matches!(
            ordered_cone_decomposition(&BlochScaling::new(1.0, 1.0, 0.0), 1e-9),
            Err(Error::NotInCone { .. })
        ));
    }

    #[test]
    fn cone_generators_match_their_channels() {
        for (g, ch) in CONE_GENERATORS.iter().zip(cone_channels()) {
            let d = scaling_from_lambdas(&ch.coefficients.map(|m| 2.0 * m)).d;
            assert!(close3(d, *g, 1e-15));
        }
    }

    #[test]
    fn scaling_equivalence_examples() {
        let d = BlochScaling::new(0.5, 0.3, 0.2);
        assert!(scaling_equivalent(&d, &d, 1e-12));
        assert!(scaling_equivalent(&d, &BlochScaling::new(0.3, 0.5, 0.2), 1e-12));
        assert!(!scaling_equivalent(&d, &BlochScaling::new(-0.5, 0.3, 0.2), 1e-12));
    }

    #[test]
    fn twenty_four_symmetries() {
        let q = scaling_symmetries();
        assert_eq!(q.len(), 24);
        let d = BlochScaling::new(0.5, -0.3, 0.2);
        for m in &q {
            assert!((m.det().abs() - 1.0).abs() < 1e-15);
            let e = d.transform(m);
            assert!(scaling_equivalent(&d, &e, 1e-15), "{:?}", e.d);
        }
    }

    #[test]
    fn ordered_representative_is_ordered_and_equivalent() {
        let d = BlochScaling::new(-0.2, 0.6, 0.4);
        let r = d.ordered_representative();
        assert_eq!(r.d, [0.6, 0.4, -0.2]);
        assert!(scaling_equivalent(&d, &r, 1e-15));
    }
}
