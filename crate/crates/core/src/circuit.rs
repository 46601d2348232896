//! Gate-list circuits, ASAP layering into time steps, a seeded random
//! generator, and the JSON circuit file format.
//!
//! Only CX gates carry two qubits. Single-qubit gates are kept so that the
//! layering (and therefore the number of time steps) matches the source
//! program, but they never contribute to communication cost.

use std::fmt;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer};

use crate::error::{Error, Result};
use crate::rng::{index, seeded};

/// Calibrated so that `generate_random(50, 95, ..)` yields ~353 CX gates.
pub const DEFAULT_CX_FRACTION: f64 = 0.1486;

const SINGLE_QUBIT_LABELS: [&str; 6] = ["h", "x", "sx", "rz", "s", "t"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    Cx,
    SingleQubit,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
    label: String,
}

impl Gate {
    pub fn cx(control: usize, target: usize) -> Self {
        Gate {
            kind: GateKind::Cx,
            qubits: vec![control, target],
            label: "cx".to_string(),
        }
    }

    pub fn single(label: impl Into<String>, qubit: usize) -> Self {
        Gate {
            kind: GateKind::SingleQubit,
            qubits: vec![qubit],
            label: label.into(),
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `(control, target)` for a CX gate.
    pub fn as_cx(&self) -> Option<(usize, usize)> {
        match self.kind {
            GateKind::Cx => Some((self.qubits[0], self.qubits[1])),
            GateKind::SingleQubit => None,
        }
    }

    fn check(&self, num_qubits: usize) -> std::result::Result<(), String> {
        if let Some(&q) = self.qubits.iter().find(|&&q| q >= num_qubits) {
            return Err(format!("qubit {q} out of range for a {num_qubits}-qubit circuit"));
        }
        match self.kind {
            GateKind::Cx if self.qubits.len() != 2 => Err("cx takes two qubits".into()),
            GateKind::Cx if self.qubits[0] == self.qubits[1] => {
                Err(format!("cx qubits must be distinct, got {0} twice", self.qubits[0]))
            }
            GateKind::SingleQubit if self.qubits.len() != 1 => Err(format!("'{}' takes exactly one qubit", self.label)),
            GateKind::SingleQubit if self.label.is_empty() || self.label == "cx" => {
                Err(format!("invalid single-qubit gate label '{}'", self.label))
            }
            _ => Ok(()),
        }
    }
}

/// A circuit as an ordered gate list (list order is program order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        for (i, gate) in gates.iter().enumerate() {
            gate.check(num_qubits)
                .map_err(|msg| Error::InvalidCircuit(format!("gate {i}: {msg}")))?;
        }
        Ok(Circuit { num_qubits, gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn cx_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::Cx).count()
    }

    /// Gate subsequence touching `qubit`, in program order.
    pub fn qubit_gates(&self, qubit: usize) -> Vec<&Gate> {
        self.gates.iter().filter(|g| g.qubits.contains(&qubit)).collect()
    }

    pub fn depth(&self) -> usize {
        layerize(self).depth()
    }

    pub fn to_json(&self) -> String {
        serialize_circuit(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        parse_circuit(text)
    }
}

/// A circuit split into time steps. Layer `t` holds gates acting on pairwise
/// disjoint qubits; `cx_pairs(t)` is the set of CX gates executed at step `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCircuit {
    num_qubits: usize,
    layers: Vec<Vec<Gate>>,
    cx_pairs: Vec<Vec<(usize, usize)>>,
}

impl LayeredCircuit {
    /// Builds a layered circuit from explicit layers. Empty layers are
    /// allowed; they still count as time steps.
    pub fn from_layers(num_qubits: usize, layers: Vec<Vec<Gate>>) -> Result<Self> {
        let mut seen = vec![usize::MAX; num_qubits];
        for (t, layer) in layers.iter().enumerate() {
            for gate in layer {
                gate.check(num_qubits)
                    .map_err(|msg| Error::InvalidCircuit(format!("layer {t}: {msg}")))?;
                for &q in gate.qubits() {
                    if seen[q] == t {
                        return Err(Error::InvalidCircuit(format!(
                            "layer {t}: qubit {q} used by more than one gate"
                        )));
                    }
                    seen[q] = t;
                }
            }
        }
        let cx_pairs = layers
            .iter()
            .map(|layer| layer.iter().filter_map(Gate::as_cx).collect())
            .collect();
        Ok(LayeredCircuit {
            num_qubits,
            layers,
            cx_pairs,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of time steps `T`.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn cx_pairs(&self, step: usize) -> &[(usize, usize)] {
        &self.cx_pairs[step]
    }

    pub fn cx_count(&self) -> usize {
        self.cx_pairs.iter().map(Vec::len).sum()
    }

    /// Concatenates the layers back into a gate list.
    pub fn flatten(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.layers.iter().flatten().cloned().collect(),
        }
    }
}

/// ASAP layering: every gate lands in the layer right after the latest
/// layer already occupied on any of its qubits.
pub fn layerize(circuit: &Circuit) -> LayeredCircuit {
    let mut frontier = vec![0usize; circuit.num_qubits];
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    for gate in &circuit.gates {
        let layer = gate.qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0);
        if layer == layers.len() {
            layers.push(Vec::new());
        }
        layers[layer].push(gate.clone());
        for &q in &gate.qubits {
            frontier[q] = layer + 1;
        }
    }
    let cx_pairs = layers
        .iter()
        .map(|layer| layer.iter().filter_map(Gate::as_cx).collect())
        .collect();
    LayeredCircuit {
        num_qubits: circuit.num_qubits,
        layers,
        cx_pairs,
    }
}

/// Seeded random circuit built layer by layer.
///
/// Every layer touches every qubit, so the ASAP depth equals `target_depth`
/// exactly. CX gates are spread evenly over the layers so that the total is
/// `round(cx_fraction * num_qubits * target_depth / 2)`; qubits inside a
/// layer are drawn without replacement.
pub fn generate_random(num_qubits: usize, target_depth: usize, cx_fraction: f64, seed: u64) -> Result<Circuit> {
    if num_qubits < 2 {
        return Err(Error::InvalidParameter(format!(
            "num_qubits must be at least 2, got {num_qubits}"
        )));
    }
    if target_depth < 1 {
        return Err(Error::InvalidParameter("target_depth must be at least 1".into()));
    }
    if !(cx_fraction > 0.0 && cx_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "cx_fraction must lie in (0, 1), got {cx_fraction}"
        )));
    }

    let mut rng = seeded(seed);
    let per_layer = cx_fraction * num_qubits as f64 / 2.0;
    let max_per_layer = num_qubits / 2;
    let mut order: Vec<usize> = (0..num_qubits).collect();
    let mut gates = Vec::with_capacity(num_qubits * target_depth);

    for t in 0..target_depth {
        let before = (t as f64 * per_layer).round() as usize;
        let after = ((t + 1) as f64 * per_layer).round() as usize;
        let n_cx = (after - before).min(max_per_layer);

        order.shuffle(&mut rng);
        for pair in order[..2 * n_cx].chunks_exact(2) {
            gates.push(Gate::cx(pair[0], pair[1]));
        }
        for &q in &order[2 * n_cx..] {
            let label = SINGLE_QUBIT_LABELS[index(&mut rng, SINGLE_QUBIT_LABELS.len())];
            gates.push(Gate::single(label, q));
        }
    }
    Circuit::new(num_qubits, gates)
}

/// Serializes to the normalized circuit file format, one gate per line.
pub fn serialize_circuit(circuit: &Circuit) -> String {
    let mut out = String::new();
    write!(out, "{{\"n\": {}, \"gates\": [", circuit.num_qubits).unwrap();
    for (i, gate) in circuit.gates.iter().enumerate() {
        out.push_str(if i == 0 { "\n  " } else { ",\n  " });
        let label = serde_json::to_string(&gate.label).expect("string serialization");
        write!(out, "[{label}").unwrap();
        for q in &gate.qubits {
            write!(out, ", {q}").unwrap();
        }
        out.push(']');
    }
    if !circuit.gates.is_empty() {
        out.push('\n');
    }
    out.push_str("]}\n");
    out
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Raw {
        n: usize,
        gates: Vec<Gate>,
    }
    let raw: Raw = serde_json::from_str(text)?;
    Circuit::new(raw.n, raw.gates)
}

impl<'de> Deserialize<'de> for Gate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct GateVisitor;

        impl<'de> Visitor<'de> for GateVisitor {
            type Value = Gate;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str(r#"a gate array such as ["cx", 0, 1] or ["h", 0]"#)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Gate, A::Error> {
                let label: String = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::custom("empty gate array"))?;
                let mut qubits = Vec::new();
                while let Some(q) = seq.next_element::<usize>()? {
                    qubits.push(q);
                }
                let gate = if label == "cx" {
                    Gate {
                        kind: GateKind::Cx,
                        qubits,
                        label,
                    }
                } else {
                    Gate {
                        kind: GateKind::SingleQubit,
                        qubits,
                        label,
                    }
                };
                // Range checks need the qubit count and happen in `Circuit::new`.
                gate.check(usize::MAX).map_err(de::Error::custom)?;
                Ok(gate)
            }
        }

        deserializer.deserialize_seq(GateVisitor)
    }
}
