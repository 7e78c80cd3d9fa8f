//! Certificates: a claim about an automaton plus the evidence for it.
//!
//! Every certificate has the shape
//! `{version, kind, subject, payload, transcript}`. The subject names the
//! automaton, by content hash and definition for a [`LinearCA`] or by name
//! and prime for the built-in counterexamples. The transcript is a pure
//! function of subject and payload, computed with the evaluation routines
//! (composition, application, window matrices). Verification recomputes it
//! and accepts only an exact match with `holds: true`.

use serde_json::{json, Value};

use super::json::{
    as_array, as_i64, as_u64, as_usize, ca_from_json, ca_to_json, config_from_json, config_to_json, field, field_str,
    lazy_from_json, lazy_to_json, pattern_from_json, pattern_to_json, sparse_to_json, window_from_json,
    window_to_json,
};
use super::{canonicalize, content_hash, FORMAT_VERSION};
use crate::ca::{Configuration, LinearCA, Pattern};
use crate::counterexamples::{
    sigma_nonreversibility_witness, sigma_prime_apply, sigma_prime_forced_support, ForcedSupport, SigmaWitness,
    SparseVector,
};
use crate::error::{Error, Result};
use crate::linalg::{Fp, Matrix};
use crate::ml::{ReversibilityCertificate, Witness};

/// Outcome of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub kind: String,
    pub holds: bool,
    /// Why the certificate was rejected.
    pub reason: Option<String>,
}

fn ca_subject(ca: &LinearCA) -> Value {
    let definition = ca_to_json(ca);
    json!({"hash": content_hash(&definition), "definition": definition})
}

fn named_subject(automaton: &str, field: Fp) -> Value {
    json!({"automaton": automaton, "p": field.p()})
}

fn assemble(kind: &str, subject: Value, payload: Value) -> Result<Value> {
    let transcript = transcript(kind, &subject, &payload)?;
    Ok(canonicalize(&json!({
        "version": FORMAT_VERSION,
        "kind": kind,
        "subject": subject,
        "payload": payload,
        "transcript": transcript,
    })))
}

pub fn reversible_certificate(cert: &ReversibilityCertificate) -> Result<Value> {
    assemble(
        "reversible",
        ca_subject(&cert.ca),
        json!({"inverse": ca_to_json(&cert.inverse), "radius": cert.radius}),
    )
}

/// `kernel-witness`, `not-in-image` or `left-inverse-only`, by witness.
pub fn witness_certificate(ca: &LinearCA, witness: &Witness) -> Result<Value> {
    let (kind, payload) = match witness {
        Witness::Kernel(x) => ("kernel-witness", json!({"configuration": config_to_json(x)})),
        Witness::EmptyFiber { source, target } => (
            "not-in-image",
            json!({"source": window_to_json(source.as_slice()), "target": pattern_to_json(target)}),
        ),
        Witness::LeftInverseOnly { left_inverse } => {
            ("left-inverse-only", json!({"left_inverse": ca_to_json(left_inverse)}))
        }
    };
    assemble(kind, ca_subject(ca), payload)
}

/// A prefix `x'` on `A_N` whose image agrees with `y` on `B_N`.
pub fn preimage_certificate(ca: &LinearCA, target: &Configuration, window: usize, pattern: &Pattern) -> Result<Value> {
    assemble(
        "preimage",
        ca_subject(ca),
        json!({"target": config_to_json(target), "window": window, "pattern": pattern_to_json(pattern)}),
    )
}

pub fn sigma_witness_certificate(w: &SigmaWitness, field: Fp) -> Result<Value> {
    assemble(
        "sigma-witness",
        named_subject("sigma", field),
        json!({"j0": w.j0, "radius": w.radius, "y": lazy_to_json(&w.y), "z": lazy_to_json(&w.z)}),
    )
}

pub fn closure_certificate(w: &crate::counterexamples::ClosureWitness, field: Fp) -> Result<Value> {
    assemble("sigma-prime-closure", named_subject("sigma-prime", field), json!({"m": w.m, "x": lazy_to_json(&w.x)}))
}

pub fn forced_support_certificate(r: &ForcedSupport, field: Fp) -> Result<Value> {
    assemble(
        "sigma-prime-forced-support",
        named_subject("sigma-prime", field),
        json!({"depth": r.depth, "solution": r.solution}),
    )
}

/// Checks a certificate from scratch. Malformed input is an error; a
/// well-formed certificate whose evidence fails yields `holds: false`.
pub fn verify_certificate(cert: &Value) -> Result<Verification> {
    let kind = field_str(cert, "kind")?.to_string();
    let version = as_u64(field(cert, "version")?, "version")?;
    let reject = |kind: String, reason: &str| Verification { kind, holds: false, reason: Some(reason.into()) };
    if version != FORMAT_VERSION {
        return Ok(reject(kind, "unsupported certificate version"));
    }
    let subject = field(cert, "subject")?;
    if let Some(definition) = subject.get("definition") {
        if field_str(subject, "hash")? != content_hash(definition) {
            return Ok(reject(kind, "subject hash does not match its definition"));
        }
    }
    let expected = transcript(&kind, subject, field(cert, "payload")?)?;
    if canonicalize(field(cert, "transcript")?) != expected {
        return Ok(reject(kind, "transcript differs from the recomputed one"));
    }
    if expected.get("holds") != Some(&Value::Bool(true)) {
        return Ok(reject(kind, "the recomputed evidence does not support the claim"));
    }
    Ok(Verification { kind, holds: true, reason: None })
}

fn subject_ca(subject: &Value) -> Result<LinearCA> {
    ca_from_json(field(subject, "definition")?)
}

fn subject_field(subject: &Value, automaton: &str) -> Result<Fp> {
    let name = field_str(subject, "automaton")?;
    if name != automaton {
        return Err(Error::Parse(format!("expected automaton `{automaton}`, found `{name}`")));
    }
    Fp::new(as_u64(field(subject, "p")?, "p")?)
}

fn transcript(kind: &str, subject: &Value, payload: &Value) -> Result<Value> {
    let t = match kind {
        "reversible" => {
            let ca = subject_ca(subject)?;
            let inverse = ca_from_json(field(payload, "inverse")?)?;
            let left = inverse.compose(&ca)?;
            let right = ca.compose(&inverse)?;
            json!({
                "left": ca_to_json(&left),
                "right": ca_to_json(&right),
                "holds": left.is_identity() && right.is_identity(),
            })
        }
        "left-inverse-only" => {
            let ca = subject_ca(subject)?;
            let nu = ca_from_json(field(payload, "left_inverse")?)?;
            let left = nu.compose(&ca)?;
            let right = ca.compose(&nu)?;
            json!({
                "left": ca_to_json(&left),
                "right": ca_to_json(&right),
                "holds": left.is_identity() && !right.is_identity(),
            })
        }
        "kernel-witness" => {
            let ca = subject_ca(subject)?;
            let x = config_from_json(ca.group(), ca.field(), field(payload, "configuration")?)?;
            let image = ca.apply_config(&x)?;
            json!({"image": config_to_json(&image), "holds": !x.is_zero() && image.is_zero()})
        }
        "not-in-image" => {
            let ca = subject_ca(subject)?;
            let source = window_from_json(ca.group(), field(payload, "source")?)?;
            let target = pattern_from_json(ca.group(), ca.field(), field(payload, "target")?)?;
            let wm = ca.window_map_on(&source)?;
            let on_interior = target.domain() == wm.target;
            let (rank, augmented) = if on_interior {
                let b = target.to_flat(&wm.target)?;
                let column = Matrix::new(ca.field(), b.len(), 1, b)?;
                (wm.matrix.rank(), wm.matrix.hstack(&column)?.rank())
            } else {
                (wm.matrix.rank(), wm.matrix.rank())
            };
            json!({
                "interior": window_to_json(wm.target.as_slice()),
                "rank": rank,
                "augmented_rank": augmented,
                "holds": on_interior && augmented > rank,
            })
        }
        "preimage" => {
            let ca = subject_ca(subject)?;
            let y = config_from_json(ca.group(), ca.field(), field(payload, "target")?)?;
            let n = as_usize(field(payload, "window")?, "window")?;
            let x = pattern_from_json(ca.group(), ca.field(), field(payload, "pattern")?)?;
            let source = ca.ball_sequence()?.level(n)?;
            let holds_domain = x.domain() == source;
            let wm = ca.window_map_on(&source)?;
            let image = if holds_domain {
                Pattern::from_flat(&wm.target, ca.dim(), &wm.matrix.apply(&x.to_flat(&source)?)?)?
            } else {
                Pattern::empty(ca.dim())
            };
            let holds = holds_domain && image == y.restrict(&wm.target)?;
            json!({"interior": window_to_json(wm.target.as_slice()), "image": pattern_to_json(&image), "holds": holds})
        }
        "sigma-witness" => {
            let f = subject_field(subject, "sigma")?;
            let j0 = as_usize(field(payload, "j0")?, "j0")?;
            let radius = as_usize(field(payload, "radius")?, "radius")?;
            let y = lazy_from_json(f, field(payload, "y")?)?;
            let z = lazy_from_json(f, field(payload, "z")?)?;
            let reference = sigma_nonreversibility_witness(j0, radius, f)?;
            let alternative = sparse_to_json(&reference.alternative_z_at_0);
            let claimed = SigmaWitness {
                y,
                z,
                inverse_y_at_0: SparseVector::zero(),
                inverse_z_at_0: SparseVector::basis(reference.expected_index()),
                ..reference
            };
            let agree = claimed.agreement_cells().all(|n| claimed.y.value_at(n) == claimed.z.value_at(n));
            let iy = crate::counterexamples::sigma_inverse_apply(&claimed.y, f)?.value_at(0);
            let iz = crate::counterexamples::sigma_inverse_apply(&claimed.z, f)?.value_at(0);
            json!({
                "agree_left_of": j0 as i64 - 1,
                "agree": agree,
                "inverse_y_at_0": sparse_to_json(&iy),
                "inverse_z_at_0": sparse_to_json(&iz),
                "expected_index": claimed.expected_index(),
                "alternative_z_at_0": alternative,
                "holds": claimed.check(f)?,
            })
        }
        "sigma-prime-closure" => {
            let f = subject_field(subject, "sigma-prime")?;
            let m = as_i64(field(payload, "m")?, "m")?;
            let x = lazy_from_json(f, field(payload, "x")?)?;
            let image = sigma_prime_apply(&x, f)?;
            let c = SparseVector::basis(1);
            let values: Vec<Value> = (-m..=m).map(|n| json!([n, sparse_to_json(&image.value_at(n))])).collect();
            let holds = m >= 0 && x.value_at(-m - 1).is_zero() && (-m..=m).all(|n| image.value_at(n) == c);
            json!({"values": values, "holds": holds})
        }
        "sigma-prime-forced-support" => {
            let f = subject_field(subject, "sigma-prime")?;
            let depth = as_usize(field(payload, "depth")?, "depth")?;
            let solution = as_array(field(payload, "solution")?, "solution")?
                .iter()
                .map(|cell| as_array(cell, "cell")?.iter().map(|c| Ok(f.reduce(as_i64(c, "entry")?))).collect())
                .collect::<Result<Vec<Vec<u32>>>>()?;
            let solved = sigma_prime_forced_support(depth, f)?;
            let claimed = ForcedSupport { solution, ..solved.clone() };
            let solution_ok = claimed.solution.iter().all(|c| c.len() == solved.truncation) && claimed.check_solution(f)?;
            json!({
                "truncation": solved.truncation,
                "forced_ones": solved.forced_ones,
                "determined": solved.determined,
                "solution_ok": solution_ok,
                "holds": solution_ok && solved.forced_ones == (1..=depth).collect::<Vec<_>>(),
            })
        }
        other => return Err(Error::Parse(format!("unknown certificate kind `{other}`"))),
    };
    Ok(canonicalize(&t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexamples::{sigma_prime_closure_witness, sigma_truncation};
    use crate::format::{canonical_string, parse};
    use crate::groups::{GroupDescriptor, GroupElement};
    use crate::ml::{invert_ca, preimage_extract, InvertOptions, PreimageOptions, PreimageOutcome};

    fn int(k: i64) -> GroupElement {
        GroupElement::Int(k)
    }

    fn round_trip(cert: &Value) -> Value {
        let text = canonical_string(cert);
        let back = parse(&text).unwrap();
        assert_eq!(canonical_string(&back), text);
        back
    }

    fn accepted(cert: &Value) -> bool {
        verify_certificate(&round_trip(cert)).unwrap().holds
    }

    #[test]
    fn reversible_certificate_for_sigma_truncation() {
        let f = Fp::new(3).unwrap();
        let ca = sigma_truncation(3, f).unwrap();
        let outcome = invert_ca(&ca, InvertOptions::default()).unwrap();
        let cert = reversible_certificate(outcome.certificate().unwrap()).unwrap();
        assert!(accepted(&cert));

        let mut tampered = cert.clone();
        tampered["payload"]["inverse"]["blocks"][0][0][0] = json!(2);
        assert!(!verify_certificate(&tampered).unwrap().holds);

        let mut wrong_subject = cert.clone();
        wrong_subject["subject"]["definition"]["p"] = json!(2);
        assert!(!verify_certificate(&wrong_subject).unwrap().holds);
    }

    #[test]
    fn witness_certificates() {
        let f = Fp::new(2).unwrap();
        let sum = LinearCA::from_blocks(
            GroupDescriptor::integers(),
            f,
            1,
            [(int(0), Matrix::identity(f, 1)), (int(1), Matrix::identity(f, 1))],
        )
        .unwrap();
        let w = invert_ca(&sum, InvertOptions::default()).unwrap();
        let cert = witness_certificate(&sum, w.witness().unwrap()).unwrap();
        assert_eq!(cert["kind"], "kernel-witness");
        assert!(accepted(&cert));

        let proj = Matrix::from_rows(f, &[vec![1, 0], vec![0, 0]]).unwrap();
        let ca = LinearCA::from_blocks(GroupDescriptor::integers(), f, 2, [(int(0), proj)]).unwrap();
        let y = Configuration::delta(2, int(0), vec![0, 1]).unwrap();
        let PreimageOutcome::NotInImage(w) = preimage_extract(&ca, &y, PreimageOptions::default()).unwrap() else {
            panic!()
        };
        let cert = witness_certificate(&ca, &w).unwrap();
        assert_eq!(cert["kind"], "not-in-image");
        assert!(accepted(&cert));
        let mut tampered = cert.clone();
        tampered["payload"]["target"]["cells"] = json!([]);
        assert!(!verify_certificate(&tampered).unwrap().holds);
    }

    #[test]
    fn preimage_certificate_checks_the_image() {
        let f = Fp::new(2).unwrap();
        let ca = LinearCA::from_blocks(
            GroupDescriptor::integers(),
            f,
            1,
            [(int(0), Matrix::identity(f, 1)), (int(1), Matrix::identity(f, 1))],
        )
        .unwrap();
        let y = Configuration::delta(1, int(0), vec![1]).unwrap();
        let opts = PreimageOptions { window: 3, cutoff: 8, plateau_k: 2 };
        let PreimageOutcome::Found(r) = preimage_extract(&ca, &y, opts).unwrap() else { panic!() };
        let cert = preimage_certificate(&ca, &y, 3, &r.pattern).unwrap();
        assert!(accepted(&cert));
        let other = preimage_certificate(&ca, &Configuration::zero(1), 3, &r.pattern).unwrap();
        assert!(!verify_certificate(&other).unwrap().holds);
    }

    #[test]
    fn counterexample_certificates() {
        let f = Fp::new(2).unwrap();
        let w = sigma_nonreversibility_witness(4, 6, f).unwrap();
        let cert = sigma_witness_certificate(&w, f).unwrap();
        assert!(accepted(&cert));
        let mut tampered = cert.clone();
        tampered["payload"]["z"] = json!({"cells": [[3, [[9, 1]]]], "tail": null});
        assert!(!verify_certificate(&tampered).unwrap().holds);

        let c = sigma_prime_closure_witness(5, f).unwrap();
        assert!(accepted(&closure_certificate(&c, f).unwrap()));

        let r = sigma_prime_forced_support(6, f).unwrap();
        let cert = forced_support_certificate(&r, f).unwrap();
        assert!(accepted(&cert));
        let mut tampered = cert.clone();
        tampered["payload"]["solution"][3][0] = json!(0);
        assert!(!verify_certificate(&tampered).unwrap().holds);
    }

    #[test]
    fn malformed_certificates_are_errors() {
        assert!(verify_certificate(&json!({"kind": "reversible"})).is_err());
        let bogus = json!({"version": 1, "kind": "nope", "subject": {}, "payload": {}, "transcript": {}});
        assert!(verify_certificate(&bogus).is_err());
    }
}
