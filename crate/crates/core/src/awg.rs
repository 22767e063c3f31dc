//! A single `m x l` arrayed waveguide grating.
//!
//! Input `p` reaches output `q` on exactly one wavelength, `λ_[p+q]_l`. Only
//! the main free spectral range is modelled, so an AWG with `l >= m` has
//! exactly `l` wavelengths.

use std::collections::HashSet;

use crate::addressing::FieldAddress;
use crate::error::{Error, Result};
use crate::render::{Cell, TextTable};
use crate::shuffle::ClassicalShuffle;

/// Wavelength connecting input `p` to output `q`: `(p + q) mod l`.
pub fn awg_wavelength(p: usize, q: usize, l: usize) -> Result<usize> {
    check_modulus(l)?;
    if p >= l {
        return Err(Error::range("input port", p, l));
    }
    if q >= l {
        return Err(Error::range("output port", q, l));
    }
    Ok((p + q) % l)
}

/// Output reached from input `p` on wavelength `i`: `(i - p) mod l`.
pub fn awg_output(p: usize, i: usize, l: usize) -> Result<usize> {
    check_modulus(l)?;
    if p >= l {
        return Err(Error::range("input port", p, l));
    }
    if i >= l {
        return Err(Error::range("wavelength", i, l));
    }
    Ok((i + l - p) % l)
}

/// Input that reaches output `q` on wavelength `i`: `(i - q) mod l`.
///
/// Without the input count this cannot tell whether the input exists; use
/// [`AwgSpec::input`] for that.
pub fn awg_input(q: usize, i: usize, l: usize) -> Result<usize> {
    check_modulus(l)?;
    if q >= l {
        return Err(Error::range("output port", q, l));
    }
    if i >= l {
        return Err(Error::range("wavelength", i, l));
    }
    Ok((i + l - q) % l)
}

fn check_modulus(l: usize) -> Result<()> {
    if l == 0 {
        return Err(Error::Config("AWG modulus must be positive".into()));
    }
    Ok(())
}

/// An `m x l` AWG with `l >= m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AwgSpec {
    inputs: usize,
    outputs: usize,
}

impl AwgSpec {
    pub fn new(inputs: usize, outputs: usize) -> Result<Self> {
        if inputs == 0 || outputs == 0 {
            return Err(Error::Config(format!(
                "AWG needs at least one input and one output, got {inputs}x{outputs}"
            )));
        }
        if outputs < inputs {
            return Err(Error::Config(format!(
                "AWG with fewer outputs than inputs ({inputs}x{outputs}) is not supported"
            )));
        }
        Ok(AwgSpec { inputs, outputs })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    /// `max(m, l)`, which is `l` here.
    pub fn wavelength_count(&self) -> usize {
        self.inputs.max(self.outputs)
    }

    /// Total wavelength channels on either side, `m * l`.
    pub fn channel_count(&self) -> usize {
        self.inputs * self.outputs
    }

    pub fn wavelength(&self, p: usize, q: usize) -> Result<usize> {
        if p >= self.inputs {
            return Err(Error::range("input port", p, self.inputs));
        }
        awg_wavelength(p, q, self.outputs)
    }

    pub fn output(&self, p: usize, i: usize) -> Result<usize> {
        if p >= self.inputs {
            return Err(Error::range("input port", p, self.inputs));
        }
        awg_output(p, i, self.outputs)
    }

    pub fn input(&self, q: usize, i: usize) -> Result<usize> {
        let p = awg_input(q, i, self.outputs)?;
        if p >= self.inputs {
            return Err(Error::NoInput {
                output: q,
                wavelength: i,
                input: p,
                inputs: self.inputs,
            });
        }
        Ok(p)
    }

    /// Base used for the two-field channel addresses `pq` / `qp`.
    fn address_base(&self) -> usize {
        self.wavelength_count().max(2)
    }
}

/// Wavelength routing table: row `p`, column `q` holds the wavelength index
/// connecting input `p` to output `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutingTable {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<usize>>,
}

impl RoutingTable {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, p: usize, q: usize) -> usize {
        self.entries[p][q]
    }

    pub fn row(&self, p: usize) -> &[usize] {
        &self.entries[p]
    }

    pub fn entries(&self) -> &[Vec<usize>] {
        &self.entries
    }

    pub fn to_text_table(&self) -> TextTable {
        TextTable {
            corner: "p\\q".into(),
            column_labels: (0..self.cols).map(|q| q.to_string()).collect(),
            row_labels: (0..self.rows).map(|p| p.to_string()).collect(),
            cells: self
                .entries
                .iter()
                .map(|row| row.iter().map(|&i| Cell::Wavelength(i)).collect())
                .collect(),
        }
    }
}

pub fn build_routing_table(spec: &AwgSpec) -> RoutingTable {
    let entries = (0..spec.inputs)
        .map(|p| {
            (0..spec.outputs)
                .map(|q| (p + q) % spec.outputs)
                .collect()
        })
        .collect();
    RoutingTable {
        rows: spec.inputs,
        cols: spec.outputs,
        entries,
    }
}

/// Connectivity table: entry `(p, q)` names input channel `pq` and the output
/// channel `qp` it reaches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityTable {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(FieldAddress, FieldAddress)>>,
}

impl ConnectivityTable {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, p: usize, q: usize) -> &(FieldAddress, FieldAddress) {
        &self.entries[p][q]
    }

    pub fn to_text_table(&self) -> TextTable {
        TextTable {
            corner: "p\\q".into(),
            column_labels: (0..self.cols).map(|q| q.to_string()).collect(),
            row_labels: (0..self.rows).map(|p| p.to_string()).collect(),
            cells: self
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|(i, o)| Cell::Connection(i.to_string(), o.to_string()))
                        .collect()
                })
                .collect(),
        }
    }
}

pub fn build_connectivity_table(spec: &AwgSpec) -> ConnectivityTable {
    let base = spec.address_base();
    let entries = (0..spec.inputs)
        .map(|p| {
            (0..spec.outputs)
                .map(|q| {
                    let input = FieldAddress::new(vec![p, q], base).expect("p, q below base");
                    let output = FieldAddress::new(vec![q, p], base).expect("p, q below base");
                    (input, output)
                })
                .collect()
        })
        .collect();
    ConnectivityTable {
        rows: spec.inputs,
        cols: spec.outputs,
        entries,
    }
}

/// Checks that the AWG's channel map `pq -> qp` is the shuffle `N(m,l)`.
///
/// Every input channel is pushed through the wavelength routing formulas,
/// the resulting output channel is flattened and compared against the
/// classical shuffle. The map must be a bijection and no wavelength may be
/// used twice at one input or one output port.
pub fn check_single_awg_shuffle_equivalence(spec: &AwgSpec) -> bool {
    let (m, l) = (spec.inputs, spec.outputs);
    let oracle = match ClassicalShuffle::new(m, l) {
        Ok(s) => s,
        Err(_) => return false,
    };
    let mut outputs_seen = HashSet::new();
    let mut at_input = HashSet::new();
    let mut at_output = HashSet::new();
    for p in 0..m {
        for q in 0..l {
            let Ok(i) = spec.wavelength(p, q) else {
                return false;
            };
            // The output is recovered from the wavelength, not from q.
            let Ok(out_port) = spec.output(p, i) else {
                return false;
            };
            let Ok(back) = spec.input(out_port, i) else {
                return false;
            };
            if back != p {
                return false;
            }
            // Output channel `qp`: port q, p-th channel from the top.
            let flat_out = out_port * m + p;
            match oracle.map(p * l + q) {
                Ok(expected) if expected == flat_out => {}
                _ => return false,
            }
            if !outputs_seen.insert(flat_out) {
                return false;
            }
            if !at_input.insert((p, i)) || !at_output.insert((out_port, i)) {
                return false;
            }
        }
    }
    outputs_seen.len() == m * l
}
