//! Shuffle networks: the classical `N(m,l)` and the modular `W(m,rm)` built
//! from `r` identical `m x m` AWGs sharing one set of `m` wavelengths.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::addressing::render_digits;
use crate::awg::{awg_output, awg_wavelength, RoutingTable};
use crate::error::{Error, Result};
use crate::render::{Cell, TextTable};

/// The generalized shuffle `N(m,l)`: port `q` of input group `p` connects to
/// port `p` of output group `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClassicalShuffle {
    m: usize,
    l: usize,
}

impl ClassicalShuffle {
    pub fn new(m: usize, l: usize) -> Result<Self> {
        if m == 0 || l == 0 {
            return Err(Error::Config(format!("shuffle N({m},{l}) needs m, l >= 1")));
        }
        Ok(ClassicalShuffle { m, l })
    }

    pub fn input_groups(&self) -> usize {
        self.m
    }

    pub fn output_groups(&self) -> usize {
        self.l
    }

    pub fn size(&self) -> usize {
        self.m * self.l
    }

    /// Maps flat input `p*l + q` to flat output `q*m + p`.
    pub fn map(&self, input: usize) -> Result<usize> {
        if input >= self.size() {
            return Err(Error::range("shuffle input", input, self.size()));
        }
        let (p, q) = (input / self.l, input % self.l);
        Ok(q * self.m + p)
    }

    pub fn permutation(&self) -> Vec<usize> {
        (0..self.size())
            .map(|i| self.map(i).expect("index in range"))
            .collect()
    }
}

/// Routing table `T_C` of `W(m,rm)`: `m` rows, `r*m` columns labelled
/// `(a, q')`. Each cell lists the wavelengths it holds; a legitimate table
/// holds exactly one per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularTable {
    m: usize,
    r: usize,
    cells: Vec<Vec<Vec<usize>>>,
}

impl ModularTable {
    /// Wraps arbitrary cell contents of shape `m x rm`.
    pub fn from_cells(m: usize, r: usize, cells: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if m == 0 || r == 0 {
            return Err(Error::Config(format!("modular table needs m, r >= 1, got ({m},{r})")));
        }
        if cells.len() != m || cells.iter().any(|row| row.len() != r * m) {
            return Err(Error::Shape(format!(
                "modular table for (m={m}, r={r}) must be {m} x {}",
                r * m
            )));
        }
        Ok(ModularTable { m, r, cells })
    }

    /// Presents an `m x rm` AWG routing table, unreduced, as a modular table.
    pub fn from_routing_table(table: &RoutingTable, m: usize, r: usize) -> Result<Self> {
        let cells = table
            .entries()
            .iter()
            .map(|row| row.iter().map(|&i| vec![i]).collect())
            .collect();
        Self::from_cells(m, r, cells)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn cols(&self) -> usize {
        self.r * self.m
    }

    /// `(a, q')` for flat column `q = a*m + q'`.
    pub fn column_label(&self, col: usize) -> (usize, usize) {
        (col / self.m, col % self.m)
    }

    pub fn entry(&self, p: usize, col: usize) -> &[usize] {
        &self.cells[p][col]
    }

    /// The single wavelength at `(p, (a, q'))`, if the cell holds exactly one.
    pub fn wavelength(&self, p: usize, a: usize, q: usize) -> Option<usize> {
        match self.cells.get(p)?.get(a * self.m + q)?.as_slice() {
            [i] => Some(*i),
            _ => None,
        }
    }

    pub fn to_text_table(&self) -> TextTable {
        TextTable {
            corner: "p\\(a,q')".into(),
            column_labels: (0..self.cols())
                .map(|c| {
                    let (a, q) = self.column_label(c);
                    format!("({a},{q})")
                })
                .collect(),
            row_labels: (0..self.m).map(|p| p.to_string()).collect(),
            cells: self
                .cells
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|cell| match cell.as_slice() {
                            [i] => Cell::Wavelength(*i),
                            many => Cell::WavelengthSet(many.to_vec()),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// `T_C` for `W(m,rm)`: entry `(p, (a, q')) = [p + q']_m`.
pub fn build_modular_table(m: usize, r: usize) -> Result<ModularTable> {
    if m == 0 || r == 0 {
        return Err(Error::Config(format!("W(m,rm) needs m, r >= 1, got ({m},{r})")));
    }
    let cells = (0..m)
        .map(|p| (0..r * m).map(|q| vec![(p + q % m) % m]).collect())
        .collect();
    ModularTable::from_cells(m, r, cells)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LegitimacyCondition {
    /// Only `m` distinct wavelengths (indices `0..m`) appear.
    WavelengthSet,
    /// Exactly one wavelength per entry.
    SingleWavelength,
    /// Each wavelength `r` times per row and once per column.
    Distribution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionOutcome {
    pub condition: LegitimacyCondition,
    pub passed: bool,
    /// First violating cell as `(row, column)`.
    pub violation: Option<(usize, usize)>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub outcomes: Vec<ConditionOutcome>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn outcome(&self, condition: LegitimacyCondition) -> &ConditionOutcome {
        self.outcomes
            .iter()
            .find(|o| o.condition == condition)
            .expect("every condition is reported")
    }
}

pub fn validate_modular_table(t: &ModularTable) -> ValidationReport {
    let (m, r) = (t.m, t.r);
    let mut outcomes = Vec::with_capacity(3);

    let mut first_bad = None;
    let mut distinct = HashSet::new();
    for (p, row) in t.cells.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            for &i in cell {
                distinct.insert(i);
                if i >= m && first_bad.is_none() {
                    first_bad = Some((p, c));
                }
            }
        }
    }
    outcomes.push(ConditionOutcome {
        condition: LegitimacyCondition::WavelengthSet,
        passed: first_bad.is_none(),
        violation: first_bad,
        detail: format!("{} distinct wavelengths, {m} allowed", distinct.len()),
    });

    let first_multi = t.cells.iter().enumerate().find_map(|(p, row)| {
        row.iter().position(|cell| cell.len() != 1).map(|c| (p, c))
    });
    outcomes.push(ConditionOutcome {
        condition: LegitimacyCondition::SingleWavelength,
        passed: first_multi.is_none(),
        violation: first_multi,
        detail: match first_multi {
            Some((p, c)) => format!("entry ({p},{c}) holds {} wavelengths", t.cells[p][c].len()),
            None => "every entry holds one wavelength".into(),
        },
    });

    outcomes.push(check_distribution(t, m, r));
    ValidationReport { outcomes }
}

fn check_distribution(t: &ModularTable, m: usize, r: usize) -> ConditionOutcome {
    let outcome = |violation: Option<(usize, usize)>, detail: String| ConditionOutcome {
        condition: LegitimacyCondition::Distribution,
        passed: violation.is_none(),
        violation,
        detail,
    };
    for (p, row) in t.cells.iter().enumerate() {
        let mut counts = vec![0usize; m];
        for (c, cell) in row.iter().enumerate() {
            for &i in cell {
                if i >= m {
                    return outcome(Some((p, c)), format!("λ{i} at ({p},{c}) is outside Λ"));
                }
                counts[i] += 1;
                if counts[i] > r {
                    return outcome(
                        Some((p, c)),
                        format!("λ{i} appears more than {r} times in row {p}"),
                    );
                }
            }
        }
        if let Some(i) = counts.iter().position(|&n| n != r) {
            return outcome(
                Some((p, 0)),
                format!("λ{i} appears {} times in row {p}, expected {r}", counts[i]),
            );
        }
    }
    for c in 0..t.cols() {
        let mut seen = vec![false; m];
        for p in 0..m {
            for &i in &t.cells[p][c] {
                if std::mem::replace(&mut seen[i], true) {
                    return outcome(
                        Some((p, c)),
                        format!("λ{i} appears more than once in column {c}"),
                    );
                }
            }
        }
    }
    outcome(None, format!("each wavelength {r} times per row, once per column"))
}

/// Port `port` of input group `group` feeds input `awg_input` of AWG `awg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InputWire {
    pub group: usize,
    pub port: usize,
    pub awg: usize,
    pub awg_input: usize,
}

/// Output group `group` is output `awg_output` of AWG `awg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutputLabel {
    pub group: usize,
    pub awg: usize,
    pub awg_output: usize,
}

/// Input channel `p a q'` of `W(m,rm)`: group `p`, port `a`, wavelength
/// field `q'`. It rides fiber `(p, a)` on `λ_[p+q']_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InputChannel {
    pub group: usize,
    pub port: usize,
    pub field: usize,
}

/// Output channel `a q' p`: output group `(a, q')`, `p`-th channel on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutputChannel {
    pub awg: usize,
    pub output: usize,
    pub field: usize,
}

impl InputChannel {
    pub fn new(group: usize, port: usize, field: usize) -> Self {
        InputChannel { group, port, field }
    }

    /// `p*(r*m) + a*m + q'`.
    pub fn flat(&self, m: usize, r: usize) -> usize {
        self.group * r * m + self.port * m + self.field
    }
}

impl OutputChannel {
    /// `(a*m + q')*m + p`, i.e. output group `q` times `m` plus `p`.
    pub fn flat(&self, m: usize) -> usize {
        (self.awg * m + self.output) * m + self.field
    }
}

impl fmt::Display for InputChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fields = [self.group, self.port, self.field];
        let base = fields.iter().max().map_or(2, |&x| (x + 1).max(2));
        f.write_str(&render_digits(&fields, base))
    }
}

impl fmt::Display for OutputChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fields = [self.awg, self.output, self.field];
        let base = fields.iter().max().map_or(2, |&x| (x + 1).max(2));
        f.write_str(&render_digits(&fields, base))
    }
}

/// `W(m,rm)`: `m` input groups of `r` fibers each, `r` AWGs of size `m x m`,
/// and `r*m` single-fiber output groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularShuffle {
    m: usize,
    r: usize,
    wiring: Vec<InputWire>,
    output_labels: Vec<OutputLabel>,
    /// `awg * m + awg_output` -> output group.
    #[serde(skip)]
    output_index: Vec<usize>,
}

/// Builds `W(m,rm)`: port `a` of input group `p` goes to input
/// `p` of AWG `a`; output group `q` is output `q mod m` of AWG `q / m`.
pub fn build_w(m: usize, r: usize) -> Result<ModularShuffle> {
    if m == 0 || r == 0 {
        return Err(Error::Config(format!("W(m,rm) needs m, r >= 1, got ({m},{r})")));
    }
    let wiring = (0..m)
        .flat_map(|p| {
            (0..r).map(move |a| InputWire {
                group: p,
                port: a,
                awg: a,
                awg_input: p,
            })
        })
        .collect();
    let output_labels = (0..r * m)
        .map(|q| OutputLabel {
            group: q,
            awg: q / m,
            awg_output: q % m,
        })
        .collect();
    ModularShuffle::from_parts(m, r, wiring, output_labels)
}

impl ModularShuffle {
    /// Assembles a fabric from explicit wiring, checking that every AWG port
    /// is used exactly once. Wires must be listed by `(group, port)` and
    /// labels by output group.
    pub fn from_parts(
        m: usize,
        r: usize,
        wiring: Vec<InputWire>,
        output_labels: Vec<OutputLabel>,
    ) -> Result<Self> {
        let mut w = ModularShuffle {
            m,
            r,
            wiring,
            output_labels,
            output_index: Vec::new(),
        };
        w.reindex()?;
        Ok(w)
    }

    /// Re-establishes the lookup index; run after deserializing.
    pub(crate) fn reindex(&mut self) -> Result<()> {
        let (m, r) = (self.m, self.r);
        if m == 0 || r == 0 {
            return Err(Error::Config(format!("W(m,rm) needs m, r >= 1, got ({m},{r})")));
        }
        if self.wiring.len() != r * m {
            return Err(Error::Config(format!(
                "expected {} input wires, found {}",
                r * m,
                self.wiring.len()
            )));
        }
        if self.output_labels.len() != r * m {
            return Err(Error::Config(format!(
                "expected {} output labels, found {}",
                r * m,
                self.output_labels.len()
            )));
        }
        let mut used = HashSet::new();
        for (k, wire) in self.wiring.iter().enumerate() {
            if (wire.group, wire.port) != (k / r, k % r) {
                return Err(Error::Config(format!(
                    "wire {k} is for ({}, {}), expected ({}, {})",
                    wire.group,
                    wire.port,
                    k / r,
                    k % r
                )));
            }
            if wire.awg >= r || wire.awg_input >= m {
                return Err(Error::Config(format!("wire {k} targets a missing AWG port")));
            }
            if !used.insert((wire.awg, wire.awg_input)) {
                return Err(Error::Config(format!(
                    "AWG {} input {} is wired twice",
                    wire.awg, wire.awg_input
                )));
            }
        }
        let mut index = vec![usize::MAX; r * m];
        for (q, label) in self.output_labels.iter().enumerate() {
            if label.group != q || label.awg >= r || label.awg_output >= m {
                return Err(Error::Config(format!("output label {q} is malformed")));
            }
            let slot = &mut index[label.awg * m + label.awg_output];
            if *slot != usize::MAX {
                return Err(Error::Config(format!(
                    "AWG {} output {} is labelled twice",
                    label.awg, label.awg_output
                )));
            }
            *slot = q;
        }
        self.output_index = index;
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn awg_count(&self) -> usize {
        self.r
    }

    /// Fibers on one side of the fabric, `r*m`.
    pub fn fiber_count(&self) -> usize {
        self.r * self.m
    }

    /// Wavelength channels on one side, `r*m^2`.
    pub fn channel_count(&self) -> usize {
        self.r * self.m * self.m
    }

    pub fn wiring(&self) -> &[InputWire] {
        &self.wiring
    }

    pub fn output_labels(&self) -> &[OutputLabel] {
        &self.output_labels
    }

    /// Whether the wiring is exactly the S3/S4 construction.
    pub fn follows_construction(&self) -> bool {
        self.wiring
            .iter()
            .all(|w| w.awg == w.port && w.awg_input == w.group)
            && self
                .output_labels
                .iter()
                .all(|l| l.awg == l.group / self.m && l.awg_output == l.group % self.m)
    }

    /// All input channels in flat order.
    pub fn input_channels(&self) -> impl Iterator<Item = InputChannel> + '_ {
        (0..self.m).flat_map(move |p| {
            (0..self.r).flat_map(move |a| (0..self.m).map(move |q| InputChannel::new(p, a, q)))
        })
    }

    /// Follows input channel `p a q'` through the wiring and its AWG.
    ///
    /// Returns the output channel and the wavelength index `[p + q']_m`.
    pub fn connect(&self, ch: InputChannel) -> Result<(OutputChannel, usize)> {
        let (m, r) = (self.m, self.r);
        if ch.group >= m {
            return Err(Error::range("input group", ch.group, m));
        }
        if ch.port >= r {
            return Err(Error::range("input port", ch.port, r));
        }
        if ch.field >= m {
            return Err(Error::range("wavelength field", ch.field, m));
        }
        let wire = self.wiring[ch.group * r + ch.port];
        let wavelength = (ch.group + ch.field) % m;
        let awg_out = awg_output(wire.awg_input, wavelength, m)?;
        let q = self.output_index[wire.awg * m + awg_out];
        let out = OutputChannel {
            awg: q / m,
            output: q % m,
            field: wire.awg_input,
        };
        Ok((out, wavelength))
    }

    /// `T_C` recomputed from the physical wiring: for every input group and
    /// output group, the wavelength on which the group's fiber into that
    /// AWG reaches that AWG output.
    pub fn routing_table(&self) -> Result<ModularTable> {
        let m = self.m;
        let cells = (0..m)
            .map(|p| {
                self.output_labels
                    .iter()
                    .map(|label| {
                        let wire = self.wiring[p * self.r..(p + 1) * self.r]
                            .iter()
                            .find(|w| w.awg == label.awg)
                            .ok_or_else(|| {
                                Error::Config(format!("group {p} has no fiber into AWG {}", label.awg))
                            })?;
                        Ok(vec![awg_wavelength(wire.awg_input, label.awg_output, m)?])
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ModularTable::from_cells(m, self.r, cells)
    }

    /// Connectivity table `T_D`: entry `(p, (a, q'))` pairs input channel
    /// `p a q'` with the output channel it reaches.
    pub fn connectivity_table(&self) -> Result<ShuffleConnectivityTable> {
        let entries = (0..self.m)
            .map(|p| {
                (0..self.fiber_count())
                    .map(|q| {
                        let ch = InputChannel::new(p, q / self.m, q % self.m);
                        self.connect(ch).map(|(out, _)| (ch, out))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ShuffleConnectivityTable {
            m: self.m,
            r: self.r,
            entries,
        })
    }
}

/// Free-function form of [`ModularShuffle::connect`].
pub fn w_connect(w: &ModularShuffle, ch: InputChannel) -> Result<(OutputChannel, usize)> {
    w.connect(ch)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleConnectivityTable {
    m: usize,
    r: usize,
    entries: Vec<Vec<(InputChannel, OutputChannel)>>,
}

impl ShuffleConnectivityTable {
    pub fn get(&self, p: usize, a: usize, q: usize) -> (InputChannel, OutputChannel) {
        self.entries[p][a * self.m + q]
    }

    pub fn to_text_table(&self) -> TextTable {
        TextTable {
            corner: "p\\(a,q')".into(),
            column_labels: (0..self.r * self.m)
                .map(|c| format!("({},{})", c / self.m, c % self.m))
                .collect(),
            row_labels: (0..self.m).map(|p| p.to_string()).collect(),
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

/// No two connections share a wavelength on one input fiber or on one
/// output fiber.
pub fn check_contention_free(w: &ModularShuffle) -> bool {
    let mut at_input = HashSet::new();
    let mut at_output = HashSet::new();
    let mut count = 0;
    for ch in w.input_channels() {
        let Ok((out, i)) = w.connect(ch) else {
            return false;
        };
        let out_fiber = out.awg * w.m + out.output;
        if !at_input.insert((ch.group, ch.port, i)) || !at_output.insert((out_fiber, i)) {
            return false;
        }
        count += 1;
    }
    count == w.channel_count()
}

/// The flattened channel map equals the classical shuffle `N(m, rm)`.
pub fn check_equivalence(w: &ModularShuffle) -> bool {
    let Ok(oracle) = ClassicalShuffle::new(w.m, w.r * w.m) else {
        return false;
    };
    let expected = oracle.permutation();
    let mut seen = vec![false; w.channel_count()];
    for ch in w.input_channels() {
        let Ok((out, _)) = w.connect(ch) else {
            return false;
        };
        let (src, dst) = (ch.flat(w.m, w.r), out.flat(w.m));
        if expected[src] != dst || std::mem::replace(&mut seen[dst], true) {
            return false;
        }
    }
    seen.into_iter().all(|s| s)
}
