//! Component counts and scalability figures.

use serde::Serialize;

use crate::sen::SenNetwork;
use crate::shuffle::ModularShuffle;

/// AWG sizes above this are flagged for coherent crosstalk.
pub const CROSSTALK_AWG_LIMIT: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricsReport {
    pub port_count: u64,
    pub awg_count: u64,
    pub awg_size: usize,
    /// Individual converters over all columns.
    pub twc_count: u64,
    pub twc_module_count: u64,
    pub conversion_range: usize,
    pub wavelength_granularity: usize,
    /// Fiber links inside one shuffle stage.
    pub internal_fiber_count: u64,
    /// Links a classical shuffle of the same size needs.
    pub classical_fiber_count: u64,
    pub crosstalk_flag: bool,
}

#[derive(Clone, Copy, Debug)]
pub enum Fabric<'a> {
    Shuffle(&'a ModularShuffle),
    Sen(&'a SenNetwork),
}

impl<'a> From<&'a ModularShuffle> for Fabric<'a> {
    fn from(w: &'a ModularShuffle) -> Self {
        Fabric::Shuffle(w)
    }
}

impl<'a> From<&'a SenNetwork> for Fabric<'a> {
    fn from(net: &'a SenNetwork) -> Self {
        Fabric::Sen(net)
    }
}

pub fn compute_metrics<'a>(fabric: impl Into<Fabric<'a>>) -> MetricsReport {
    match fabric.into() {
        Fabric::Shuffle(w) => {
            let (m, r) = (w.m() as u64, w.r() as u64);
            let ports = r * m * m;
            MetricsReport {
                port_count: ports,
                awg_count: r,
                awg_size: w.m(),
                twc_count: 0,
                twc_module_count: 0,
                conversion_range: 0,
                wavelength_granularity: w.m(),
                internal_fiber_count: r * m,
                classical_fiber_count: ports,
                crosstalk_flag: w.m() > CROSSTALK_AWG_LIMIT,
            }
        }
        Fabric::Sen(net) => {
            let n = net.n() as u64;
            let ports = net.port_count();
            let awgs = net.awgs_per_stage() as u64;
            MetricsReport {
                port_count: ports,
                awg_count: if awgs == 0 { 0 } else { n * awgs },
                awg_size: if awgs == 0 { 0 } else { net.m() },
                twc_count: n * ports,
                twc_module_count: n * net.twc_modules_per_column(),
                conversion_range: net.m(),
                wavelength_granularity: net.m(),
                internal_fiber_count: net.fibers_per_side(),
                classical_fiber_count: ports,
                crosstalk_flag: net.m() > CROSSTALK_AWG_LIMIT,
            }
        }
    }
}

impl MetricsReport {
    pub fn to_text(&self) -> String {
        let rows: [(&str, String); 10] = [
            ("port_count", self.port_count.to_string()),
            ("awg_count", self.awg_count.to_string()),
            ("awg_size", self.awg_size.to_string()),
            ("twc_count", self.twc_count.to_string()),
            ("twc_module_count", self.twc_module_count.to_string()),
            ("conversion_range", self.conversion_range.to_string()),
            ("wavelength_granularity", self.wavelength_granularity.to_string()),
            ("internal_fiber_count", self.internal_fiber_count.to_string()),
            ("classical_fiber_count", self.classical_fiber_count.to_string()),
            ("crosstalk_flag", self.crosstalk_flag.to_string()),
        ];
        rows.iter().map(|(k, v)| format!("{k:<24}{v}\n")).collect()
    }
}
