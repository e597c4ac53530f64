use serde::Deserialize;

use crate::alphabet::Alphabet;
use crate::causality::CausalityNetwork;
use crate::error::{Error, Result};
use crate::heap::DerivativeHeap;
use crate::pfsa::Pfsa;
use crate::xpfsa::Xpfsa;

/// Renders a real with 12 significant digits; the canonical form for every
/// probability written to disk.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.11e}")
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn string_array(items: &[String]) -> String {
    let parts: Vec<String> = items.iter().map(|s| json_string(s)).collect();
    format!("[{}]", parts.join(","))
}

fn int_matrix(rows: &[Vec<usize>]) -> String {
    let parts: Vec<String> = rows
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", parts.join(","))
}

fn real_matrix(rows: &[Vec<f64>]) -> String {
    let parts: Vec<String> = rows
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|&v| fmt_real(v)).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", parts.join(","))
}

/// Canonical machine document: alphabet, state count, transition table, and
/// morph matrix, in that order.
pub fn pfsa_to_json(p: &Pfsa) -> String {
    format!(
        "{{\"alphabet\":{},\"n_states\":{},\"delta\":{},\"morph\":{}}}",
        string_array(p.alphabet().labels()),
        p.n_states(),
        int_matrix(p.delta()),
        real_matrix(p.morph()),
    )
}

/// Cross-machine document: as the machine document, with the output alphabet
/// and output morph appended.
pub fn xpfsa_to_json(x: &Xpfsa) -> String {
    format!(
        "{{\"alphabet\":{},\"n_states\":{},\"delta\":{},\"output_alphabet\":{},\"out_morph\":{}}}",
        string_array(x.input_alphabet().labels()),
        x.n_states(),
        int_matrix(x.delta()),
        string_array(x.output_alphabet().labels()),
        real_matrix(x.out_morph()),
    )
}

#[derive(Deserialize)]
struct MachineDoc {
    alphabet: Vec<String>,
    n_states: usize,
    delta: Vec<Vec<usize>>,
    #[serde(default)]
    morph: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    output_alphabet: Option<Vec<String>>,
    #[serde(default)]
    out_morph: Option<Vec<Vec<f64>>>,
}

pub fn pfsa_from_json(text: &str) -> Result<Pfsa> {
    let doc: MachineDoc = serde_json::from_str(text)?;
    if doc.out_morph.is_some() {
        return Err(Error::MalformedFile(
            "document describes a cross-machine, not a self-model".into(),
        ));
    }
    let morph = doc
        .morph
        .ok_or_else(|| Error::MalformedFile("machine document lacks a morph matrix".into()))?;
    if doc.delta.len() != doc.n_states {
        return Err(Error::MalformedFile("n_states disagrees with delta".into()));
    }
    Pfsa::new(Alphabet::new(doc.alphabet)?, doc.delta, morph)
}

pub fn xpfsa_from_json(text: &str) -> Result<Xpfsa> {
    let doc: MachineDoc = serde_json::from_str(text)?;
    let (out_alphabet, out_morph) = match (doc.output_alphabet, doc.out_morph) {
        (Some(a), Some(m)) => (a, m),
        _ => {
            return Err(Error::MalformedFile(
                "document lacks output_alphabet/out_morph; not a cross-machine".into(),
            ))
        }
    };
    if doc.delta.len() != doc.n_states {
        return Err(Error::MalformedFile("n_states disagrees with delta".into()));
    }
    Xpfsa::new(
        Alphabet::new(doc.alphabet)?,
        Alphabet::new(out_alphabet)?,
        doc.delta,
        out_morph,
    )
}

/// Network document: node names, then one arc object per computed pair, then
/// the pairs skipped with reasons.
pub fn network_to_json(net: &CausalityNetwork) -> String {
    let arcs: Vec<String> = net
        .arcs
        .iter()
        .map(|a| {
            format!(
                "{{\"from\":{},\"to\":{},\"gamma\":{},\"n_states\":{}}}",
                json_string(&a.from),
                json_string(&a.to),
                fmt_real(a.gamma),
                a.n_states
            )
        })
        .collect();
    let skipped: Vec<String> = net
        .skipped
        .iter()
        .map(|s| {
            format!(
                "{{\"from\":{},\"to\":{},\"reason\":{}}}",
                json_string(&s.from),
                json_string(&s.to),
                json_string(&s.reason)
            )
        })
        .collect();
    format!(
        "{{\"nodes\":{},\"arcs\":[{}],\"skipped\":[{}]}}",
        string_array(&net.nodes),
        arcs.join(","),
        skipped.join(",")
    )
}

/// DOT rendering of the network; arc labels carry gamma to four decimals and
/// the pen width hints the coefficient.
pub fn network_to_dot(net: &CausalityNetwork) -> String {
    let mut out = String::from("digraph causality {\n");
    for node in &net.nodes {
        out.push_str(&format!("  {};\n", json_string(node)));
    }
    for a in &net.arcs {
        out.push_str(&format!(
            "  {} -> {} [label=\"{:.4}\" penwidth=\"{:.4}\"];\n",
            json_string(&a.from),
            json_string(&a.to),
            a.gamma,
            a.gamma
        ));
    }
    out.push_str("}\n");
    out
}

/// Debug dump of a derivative heap.
pub fn heap_to_json(heap: &DerivativeHeap) -> String {
    let entries: Vec<String> = heap
        .entries()
        .iter()
        .map(|e| {
            let symbols: Vec<String> = e
                .string
                .iter()
                .map(|&s| heap.input_alphabet().label(s).to_string())
                .collect();
            let weights: Vec<String> =
                e.distribution.weights().iter().map(|&w| fmt_real(w)).collect();
            format!(
                "{{\"string\":{},\"count\":{},\"distribution\":[{}]}}",
                json_string(&symbols.join("")),
                e.count,
                weights.join(",")
            )
        })
        .collect();
    format!("[{}]", entries.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfsa::pfsa_distance;

    fn fixture() -> Pfsa {
        Pfsa::new(
            Alphabet::binary(),
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![0.85, 0.15], vec![0.25, 0.75]],
        )
        .unwrap()
    }

    #[test]
    fn real_formatting_has_twelve_significant_digits() {
        assert_eq!(fmt_real(0.85), "8.50000000000e-1");
        assert_eq!(fmt_real(0.0), "0.00000000000e0");
        assert_eq!(fmt_real(1.0), "1.00000000000e0");
    }

    #[test]
    fn pfsa_round_trip_is_exact() {
        let p = fixture();
        let text = pfsa_to_json(&p);
        let q = pfsa_from_json(&text).unwrap();
        assert_eq!(pfsa_distance(&p, &q, 6).unwrap(), 0.0);
        assert_eq!(p.delta(), q.delta());
        for (a, b) in p.morph().iter().flatten().zip(q.morph().iter().flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
        // a second dump reproduces the bytes
        assert_eq!(text, pfsa_to_json(&q));
    }

    #[test]
    fn xpfsa_round_trip() {
        let x = Xpfsa::new(
            Alphabet::binary(),
            Alphabet::indexed(3).unwrap(),
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![0.2, 0.3, 0.5], vec![0.6, 0.2, 0.2]],
        )
        .unwrap();
        let text = xpfsa_to_json(&x);
        let y = xpfsa_from_json(&text).unwrap();
        assert_eq!(x.delta(), y.delta());
        for (a, b) in x.out_morph().iter().flatten().zip(y.out_morph().iter().flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn loaders_reject_the_wrong_kind() {
        let p = fixture();
        assert!(xpfsa_from_json(&pfsa_to_json(&p)).is_err());
        let x = Xpfsa::new(
            Alphabet::binary(),
            Alphabet::binary(),
            vec![vec![0, 0]],
            vec![vec![0.5, 0.5]],
        )
        .unwrap();
        assert!(pfsa_from_json(&xpfsa_to_json(&x)).is_err());
    }
}
