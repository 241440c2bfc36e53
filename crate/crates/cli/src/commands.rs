use std::path::Path;

use anyhow::{bail, Context};
use serde_json::{json, Value};
use unital_core::bloch::{is_channel_scaling, ordered_cone_decomposition, ordered_cone_test};
use unital_core::json::{
    canonicalization_value, channel_value, decomposition_value, equivalence_value,
    real_matrix3_value, scaling_value, spectrum_value,
};
use unital_core::{
    average_of_four, canonicalize as canonical_form, decompose as decompose_weights,
    spectrum_from_scaling, tetra_coordinates, unitarily_equivalent, verify, BlochScaling, Error,
    QubitChannel, WeightVector,
};

use crate::GenKind;

/// What a command produced: an optional document, an exit code and an
/// optional diagnostic for standard error.
pub struct Outcome {
    pub document: Option<Value>,
    pub code: u8,
    pub message: Option<String>,
}

impl Outcome {
    fn decision(document: Value, affirmative: bool) -> Self {
        Outcome {
            document: Some(document),
            code: if affirmative { 0 } else { 1 },
            message: None,
        }
    }

    fn success(document: Value) -> Self {
        Self::decision(document, true)
    }
}

/// Malformed input is a usage error; anything else the library rejects is a
/// negative answer.
fn rejected(e: Error) -> anyhow::Result<Outcome> {
    match e {
        Error::Parse { .. } | Error::NonFinite(_) => Err(e.into()),
        other => Ok(Outcome {
            document: None,
            code: 1,
            message: Some(format!("error: {other}")),
        }),
    }
}

fn load(path: &Path) -> anyhow::Result<QubitChannel> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    unital_core::json::parse_channel(&text).with_context(|| format!("{}", path.display()))
}

fn is_diagonal(ch: &QubitChannel, tol: f64) -> Option<BlochScaling> {
    let b = ch.to_bloch();
    let off = (0..3)
        .flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j)))
        .all(|(i, j)| b.linear[(i, j)].abs() <= tol);
    let centered = b.offset.iter().all(|x| x.abs() <= tol);
    (off && centered).then(|| BlochScaling::new(b.linear[(0, 0)], b.linear[(1, 1)], b.linear[(2, 2)]))
}

pub fn analyze(path: &Path, tol: f64) -> anyhow::Result<Outcome> {
    let ch = load(path)?;
    let report = ch.validate(tol);
    let spectrum = ch.choi_spectrum(tol).ok();
    let bloch = match is_diagonal(&ch, tol) {
        Some(s) => json!({
            "scaling": scaling_value(&s),
            "tetra": tetra_coordinates(&s, tol).ok().map(|t| t.barycentric),
        }),
        None => {
            let b = ch.to_bloch();
            json!({ "linear": real_matrix3_value(&b.linear), "offset": b.offset })
        }
    };
    let valid = report.is_unital_channel();
    let doc = json!({
        "kind": ch.kind(),
        "unital_channel": valid,
        "validation": {
            "hermitian_preserving": report.hermitian_preserving,
            "trace_preserving": report.trace_preserving,
            "unital": report.unital,
            "completely_positive": report.completely_positive,
            "hermitian_defect": report.hermitian_defect,
            "trace_defect": report.trace_defect,
            "trace_witness": [report.trace_witness.0, report.trace_witness.1],
            "unital_defect": report.unital_defect,
            "min_choi_eigenvalue": report.min_choi_eigenvalue,
        },
        "spectrum": spectrum.as_ref().map(spectrum_value),
        "bloch": bloch,
    });
    let mut out = Outcome::decision(doc, valid);
    if !valid {
        let mut failed = Vec::new();
        if !report.hermitian_preserving {
            failed.push("not Hermitian preserving".to_string());
        }
        if !report.trace_preserving {
            failed.push("not trace preserving".to_string());
        }
        if !report.unital {
            failed.push("not unital".to_string());
        }
        if !report.completely_positive {
            match report.min_choi_eigenvalue {
                Some(m) => failed.push(format!("not CP (min Choi eigenvalue {m})")),
                None => failed.push("not CP".to_string()),
            }
        }
        out.message = Some(format!("not a unital channel: {}", failed.join(", ")));
    }
    Ok(out)
}

pub fn canonicalize(path: &Path, tol: f64) -> anyhow::Result<Outcome> {
    let ch = load(path)?;
    match canonical_form(&ch, tol) {
        Ok(can) => Ok(Outcome::success(canonicalization_value(&can))),
        Err(e) => rejected(e),
    }
}

pub fn equiv(a: &Path, b: &Path, tol: f64) -> anyhow::Result<Outcome> {
    let (ca, cb) = (load(a)?, load(b)?);
    match unitarily_equivalent(&ca, &cb, tol) {
        Ok(eq) => Ok(Outcome::decision(equivalence_value(&eq), eq.is_equivalent())),
        Err(e) => rejected(e),
    }
}

pub fn decompose(
    path: &Path,
    weights: Option<&[f64]>,
    average: Option<u32>,
    tol: f64,
) -> anyhow::Result<Outcome> {
    let ch = load(path)?;
    let result = match (weights, average) {
        (_, Some(4)) => average_of_four(&ch, tol),
        (_, Some(m)) => decompose_weights(&ch, &WeightVector::uniform(m as usize), tol),
        (Some(w), None) => match WeightVector::new(w.to_vec(), tol) {
            Ok(target) => decompose_weights(&ch, &target, tol),
            Err(e) => Err(e),
        },
        (None, None) => bail!("one of --weights or --average is required"),
    };
    match result {
        Ok(dec) => {
            let residual = verify(&dec, &ch, tol).residual;
            Ok(Outcome::success(decomposition_value(&dec, residual)))
        }
        Err(e) => rejected(e),
    }
}

pub fn bloch(d: [f64; 3], tol: f64) -> Outcome {
    let s = BlochScaling { d };
    let check = is_channel_scaling(&s, tol);
    let ordered = s.ordered_representative();
    let doc = json!({
        "scaling": scaling_value(&s),
        "channel": check.accepted,
        "witness": check.witness,
        "spectrum": spectrum_from_scaling(&s),
        "tetra": tetra_coordinates(&s, tol).ok().map(|t| t.barycentric),
        "ordered": scaling_value(&ordered),
        "ordered_cone": ordered_cone_test(&ordered, tol).unwrap_or(false),
        "cone_decomposition": ordered_cone_decomposition(&ordered, tol).ok().map(|c| c.coefficients),
    });
    Outcome::decision(doc, check.accepted)
}

pub fn gen(kind: GenKind, coeffs: &[f64], seed: u64, tol: f64) -> anyhow::Result<Outcome> {
    if kind != GenKind::PauliMixing && !coeffs.is_empty() {
        bail!("coefficients are only accepted by pauli-mixing");
    }
    let ch = match kind {
        GenKind::Random => unital_core::random_unital_channel(seed),
        GenKind::Depolarizing => QubitChannel::depolarizing(),
        GenKind::Identity => QubitChannel::identity(),
        GenKind::PauliMixing => {
            let Ok(mu) = <[f64; 4]>::try_from(coeffs) else {
                bail!("pauli-mixing takes 4 coefficients (muI muX muY muZ), got {}", coeffs.len());
            };
            if let Some(x) = mu.iter().find(|x| !x.is_finite() || **x < -tol) {
                return rejected(Error::BadCoefficients(format!("coefficient {x} is negative")));
            }
            let total: f64 = mu.iter().sum();
            if (total - 1.0).abs() > tol {
                return rejected(Error::BadCoefficients(format!(
                    "coefficients sum to {total}, not 1"
                )));
            }
            QubitChannel::pauli(mu)
        }
    };
    Ok(Outcome::success(channel_value(&ch)))
}
