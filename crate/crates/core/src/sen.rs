//! TWC-modules and the AWG-based WDM shuffle-exchange network `S(m,n)`.
//!
//! `S(m,n)` cascades `n` shuffle stages `W(m, m^{n-1})`. After every stage
//! sits a column of `m^{n-1}` TWC-modules; the wavelength boundary in the
//! middle of each column is where conversion happens. Boundary `k` follows
//! stage `k`, and boundary `n - 1` feeds the output stage.
//!
//! A single-stage network (`n = 1`) has one fiber and no AWG: its channel
//! address is the wavelength index itself and the lone TWC column acts as
//! one `m x m` crossbar.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::addressing::{checked_power, FieldAddress, TwoTuple};
use crate::error::{Error, Result};
use crate::shuffle::{build_w, InputChannel, ModularShuffle};

/// Default cap on `m^n` for network construction.
pub const DEFAULT_CHANNEL_LIMIT: u64 = 4096;

/// An `m x m` TWC-module: demux, `m` converters, mux. The mapping sends the
/// `j`-th input wavelength to `mapping[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwcModule {
    mapping: Vec<usize>,
}

impl TwcModule {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        if mapping.is_empty() {
            return Err(Error::Config("TWC-module needs a conversion range of at least 1".into()));
        }
        let m = mapping.len();
        let mut seen = vec![false; m];
        for &w in &mapping {
            if w >= m {
                return Err(Error::range("converted wavelength", w, m));
            }
            if std::mem::replace(&mut seen[w], true) {
                return Err(Error::Config(format!(
                    "TWC mapping {mapping:?} sends two wavelengths to λ{w}"
                )));
            }
        }
        Ok(TwcModule { mapping })
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::new((0..m).collect())
    }

    /// `λ_j -> λ_[j + shift]_m`.
    pub fn rotation(m: usize, shift: usize) -> Result<Self> {
        Self::new((0..m).map(|j| (j + shift) % m.max(1)).collect())
    }

    /// Conversion range.
    pub fn size(&self) -> usize {
        self.mapping.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn apply(&self, wavelength: usize) -> Result<usize> {
        self.mapping
            .get(wavelength)
            .copied()
            .ok_or_else(|| Error::range("wavelength", wavelength, self.mapping.len()))
    }
}

pub fn twc_apply(module: &TwcModule, wavelength: usize) -> Result<usize> {
    module.apply(wavelength)
}

/// `S(m,n)`: `n` shuffle stages, each `W(m, m^{n-1})` built from
/// `m^{n-2}` AWGs, and `n` TWC columns of `m^{n-1}` modules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenNetwork {
    m: usize,
    n: usize,
    /// Empty for `n = 1`.
    stages: Vec<ModularShuffle>,
}

pub fn build_sen(m: usize, n: usize) -> Result<SenNetwork> {
    build_sen_with_limit(m, n, DEFAULT_CHANNEL_LIMIT)
}

pub fn build_sen_with_limit(m: usize, n: usize, limit: u64) -> Result<SenNetwork> {
    check_dimensions(m, n, limit)?;
    let stages = if n >= 2 {
        let r = m.pow(n as u32 - 2);
        let stage = build_w(m, r)?;
        vec![stage; n]
    } else {
        Vec::new()
    };
    Ok(SenNetwork { m, n, stages })
}

pub(crate) fn check_dimensions(m: usize, n: usize, limit: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::Config(format!("S(m,n) needs m >= 2, got m = {m}")));
    }
    if n < 1 {
        return Err(Error::Config("S(m,n) needs at least one stage".into()));
    }
    match checked_power(m, n) {
        Some(ports) if ports <= limit => Ok(ports),
        Some(ports) => Err(Error::ResourceGuard {
            what: "channel count m^n",
            required: ports as u128,
            limit: limit as u128,
        }),
        None => Err(Error::ResourceGuard {
            what: "channel count m^n",
            required: u128::MAX,
            limit: limit as u128,
        }),
    }
}

impl SenNetwork {
    /// Checks a deserialized network: dimensions, stage shapes and wiring.
    pub fn validate(&mut self, limit: u64) -> Result<()> {
        check_dimensions(self.m, self.n, limit)?;
        let expected = if self.n >= 2 { self.n } else { 0 };
        if self.stages.len() != expected {
            return Err(Error::Config(format!(
                "S({},{}) needs {expected} shuffle stages, found {}",
                self.m,
                self.n,
                self.stages.len()
            )));
        }
        for (k, stage) in self.stages.iter_mut().enumerate() {
            stage.reindex()?;
            let r = self.m.pow(self.n as u32 - 2);
            if stage.m() != self.m || stage.r() != r {
                return Err(Error::Config(format!(
                    "stage {k} is W({},{}), expected W({},{})",
                    stage.m(),
                    stage.r() * stage.m(),
                    self.m,
                    r * self.m
                )));
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stage_count(&self) -> usize {
        self.n
    }

    pub fn boundary_count(&self) -> usize {
        self.n
    }

    pub fn stages(&self) -> &[ModularShuffle] {
        &self.stages
    }

    /// Port count `N = m^n`; one wavelength channel per port.
    pub fn port_count(&self) -> u64 {
        (self.m as u64).pow(self.n as u32)
    }

    /// Fibers on one side of a stage, `m^{n-1}`; also the TWC-modules per column.
    pub fn fibers_per_side(&self) -> u64 {
        (self.m as u64).pow(self.n as u32 - 1)
    }

    pub fn twc_modules_per_column(&self) -> u64 {
        self.fibers_per_side()
    }

    /// AWGs per shuffle stage, `m^{n-2}` (none for a single-stage network).
    pub fn awgs_per_stage(&self) -> usize {
        self.stages.first().map_or(0, ModularShuffle::awg_count)
    }

    pub fn check_address(&self, addr: &FieldAddress) -> Result<()> {
        if addr.base() != self.m || addr.width() != self.n {
            return Err(Error::Shape(format!(
                "address {addr} is {}-field base {}, network S({},{}) needs {}-field base {}",
                addr.width(),
                addr.base(),
                self.m,
                self.n,
                self.n,
                self.m
            )));
        }
        Ok(())
    }

    /// Two-tuple of an input-side channel (stage input or output stage):
    /// wavelength `[x_n + x_1]_m`.
    pub fn input_tuple(&self, x: &FieldAddress) -> Result<TwoTuple> {
        self.check_address(x)?;
        if self.n == 1 {
            return Ok(TwoTuple::new(0, x.trailing()));
        }
        x.field_to_tuple()
    }

    /// Two-tuple of a stage output channel: wavelength `[y_2 + y_1]_m`.
    pub fn output_tuple(&self, y: &FieldAddress) -> Result<TwoTuple> {
        self.check_address(y)?;
        if self.n == 1 {
            return Ok(TwoTuple::new(0, y.trailing()));
        }
        let d = y.digits();
        Ok(TwoTuple::new(
            y.fiber_index(),
            (d[d.len() - 2] + d[d.len() - 1]) % self.m,
        ))
    }

    /// Passes input channel `X_k` through shuffle stage `k`.
    ///
    /// Returns `Y_k` (the input address rotated left by one field) and the
    /// wavelength `[x_n + x_1]_m`, both as produced by the stage's AWG wiring.
    pub fn stage_connect(&self, k: usize, x: &FieldAddress) -> Result<(FieldAddress, usize)> {
        if k >= self.n {
            return Err(Error::range("stage", k, self.n));
        }
        self.check_address(x)?;
        if self.n == 1 {
            return Ok((x.clone(), x.trailing()));
        }
        let (p, a, q) = x.split_fields()?;
        let (out, wavelength) = self.stages[k].connect(InputChannel::new(p, a as usize, q))?;
        let mut digits = if self.n > 2 {
            FieldAddress::from_integer(out.awg as u64, self.m, self.n - 2)?
                .digits()
                .to_vec()
        } else {
            Vec::new()
        };
        digits.push(out.output);
        digits.push(out.field);
        Ok((FieldAddress::new(digits, self.m)?, wavelength))
    }

    /// Wavelength exchange at boundary `k` on the fiber carrying `Y_k`.
    ///
    /// The trailing field is replaced by `digit`, leaving the fiber untouched.
    /// Returns `X_{k+1}` and its wavelength in the downstream region.
    pub fn boundary_exchange(
        &self,
        k: usize,
        y: &FieldAddress,
        digit: usize,
    ) -> Result<(FieldAddress, usize)> {
        if k >= self.n {
            return Err(Error::range("boundary", k, self.n));
        }
        self.check_address(y)?;
        let x = y.with_trailing(digit)?;
        let wavelength = self.input_tuple(&x)?.wavelength;
        Ok((x, wavelength))
    }

    /// All channel addresses in flat order.
    pub fn addresses(&self) -> impl Iterator<Item = FieldAddress> + '_ {
        (0..self.port_count())
            .map(move |v| FieldAddress::from_integer(v, self.m, self.n).expect("in range"))
    }
}

/// Realized input-to-output wavelength maps of a TWC-module as `mapping`
/// ranges over `modules`.
pub fn realized_permutations<'a>(
    modules: impl IntoIterator<Item = &'a TwcModule>,
) -> HashSet<Vec<usize>> {
    modules
        .into_iter()
        .map(|t| (0..t.size()).map(|j| t.apply(j).expect("in range")).collect())
        .collect()
}
