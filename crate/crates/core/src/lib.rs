//! Models of AWG-based WDM shuffle-exchange networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`addressing`]: base-`m` multi-field channel addresses and the two-tuple
//!   `(fiber, wavelength)` form.
//! * [`awg`]: a single `m x l` arrayed waveguide grating, its wavelength
//!   routing table and connectivity table.
//! * [`shuffle`]: the classical shuffle `N(m,l)`, the modular routing table and
//!   the `W(m,rm)` fabric built from `r` square AWGs.
//! * [`sen`]: tunable wavelength converter modules and the `S(m,n)`
//!   shuffle-exchange network.
//! * [`rwa`]: self-routing, contention detection and the exhaustive
//!   nonblocking verifier.
//! * [`metrics`] and [`render`]: scalability counters, table rendering and
//!   topology export.

pub mod addressing;
pub mod awg;
pub mod error;
pub mod export;
pub mod metrics;
pub mod render;
pub mod rwa;
pub mod sen;
pub mod shuffle;

pub use addressing::{FieldAddress, TwoTuple};
pub use awg::{AwgSpec, ConnectivityTable, RoutingTable};
pub use error::{Error, Result};
pub use metrics::{compute_metrics, MetricsReport};
pub use rwa::{
    detect_contentions, full_load_utilization, self_route, verify_theorem1, ChannelRef,
    Contention, Request, RequestSet, Route, Side,
};
pub use sen::{build_sen, SenNetwork, TwcModule};
pub use shuffle::{build_modular_table, build_w, ClassicalShuffle, ModularShuffle, ModularTable};
