//! Topology export as Graphviz DOT or JSON, and the JSON loaders.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sen::{SenNetwork, DEFAULT_CHANNEL_LIMIT};
use crate::shuffle::ModularShuffle;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopologyFormat {
    Dot,
    Json,
}

impl FromStr for TopologyFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(TopologyFormat::Dot),
            "json" => Ok(TopologyFormat::Json),
            other => Err(Error::Usage(format!(
                "unknown topology format {other:?} (expected dot or json)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Topology<'a> {
    Shuffle(&'a ModularShuffle),
    Sen(&'a SenNetwork),
}

impl<'a> From<&'a ModularShuffle> for Topology<'a> {
    fn from(w: &'a ModularShuffle) -> Self {
        Topology::Shuffle(w)
    }
}

impl<'a> From<&'a SenNetwork> for Topology<'a> {
    fn from(net: &'a SenNetwork) -> Self {
        Topology::Sen(net)
    }
}

pub fn emit_topology<'a>(net: impl Into<Topology<'a>>, format: TopologyFormat) -> Vec<u8> {
    let mut text = match (net.into(), format) {
        (Topology::Shuffle(w), TopologyFormat::Dot) => shuffle_dot(w),
        (Topology::Sen(s), TopologyFormat::Dot) => sen_dot(s),
        (Topology::Shuffle(w), TopologyFormat::Json) => {
            serde_json::to_string_pretty(w).expect("plain data")
        }
        (Topology::Sen(s), TopologyFormat::Json) => {
            serde_json::to_string_pretty(s).expect("plain data")
        }
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text.into_bytes()
}

pub fn load_shuffle(text: &str) -> Result<ModularShuffle> {
    let mut w: ModularShuffle =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("shuffle network: {e}")))?;
    w.reindex()?;
    Ok(w)
}

pub fn load_sen(text: &str) -> Result<SenNetwork> {
    load_sen_with_limit(text, DEFAULT_CHANNEL_LIMIT)
}

pub fn load_sen_with_limit(text: &str, limit: u64) -> Result<SenNetwork> {
    let mut net: SenNetwork =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("network: {e}")))?;
    net.validate(limit)?;
    Ok(net)
}

fn shuffle_dot(w: &ModularShuffle) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph W_{}_{} {{", w.m(), w.r() * w.m());
    out.push_str("  rankdir=LR;\n");
    for wire in w.wiring() {
        let _ = writeln!(
            out,
            "  in_{}_{} [shape=point, xlabel=\"group {} port {}\"];",
            wire.group, wire.port, wire.group, wire.port
        );
    }
    for a in 0..w.awg_count() {
        let _ = writeln!(out, "  awg_{a} [shape=box, label=\"AWG {a}\\n{0}x{0}\"];", w.m());
    }
    for label in w.output_labels() {
        let _ = writeln!(out, "  out_{0} [shape=point, xlabel=\"group {0}\"];", label.group);
    }
    for wire in w.wiring() {
        let _ = writeln!(
            out,
            "  in_{}_{} -> awg_{} [headlabel=\"{}\"];",
            wire.group, wire.port, wire.awg, wire.awg_input
        );
    }
    for label in w.output_labels() {
        let _ = writeln!(
            out,
            "  awg_{} -> out_{} [taillabel=\"{}\"];",
            label.awg, label.group, label.awg_output
        );
    }
    out.push_str("}\n");
    out
}

fn sen_dot(net: &SenNetwork) -> String {
    let fibers = net.fibers_per_side();
    let mut out = String::new();
    let _ = writeln!(out, "digraph S_{}_{} {{", net.m(), net.n());
    out.push_str("  rankdir=LR;\n  node [shape=box];\n");
    for f in 0..fibers {
        let _ = writeln!(out, "  in_{f} [shape=point];");
    }
    for k in 0..net.n() {
        if let Some(stage) = net.stages().get(k) {
            let _ = writeln!(out, "  subgraph cluster_stage_{k} {{");
            let _ = writeln!(out, "    label=\"W{k}\";");
            for a in 0..stage.awg_count() {
                let _ = writeln!(out, "    s{k}_awg_{a} [label=\"AWG {a}\"];");
            }
            out.push_str("  }\n");
        }
        let _ = writeln!(out, "  subgraph cluster_twc_{k} {{");
        let _ = writeln!(out, "    label=\"TWC column {k}\";");
        for f in 0..fibers {
            let _ = writeln!(out, "    twc_{k}_{f} [label=\"{0}x{0}\"];", net.m());
        }
        out.push_str("  }\n");
    }
    for k in 0..net.n() {
        let source = |f: u64| {
            if k == 0 {
                format!("in_{f}")
            } else {
                format!("twc_{}_{f}", k - 1)
            }
        };
        match net.stages().get(k) {
            Some(stage) => {
                let r = stage.r() as u64;
                for wire in stage.wiring() {
                    let f = wire.group as u64 * r + wire.port as u64;
                    let _ = writeln!(out, "  {} -> s{k}_awg_{};", source(f), wire.awg);
                }
                for label in stage.output_labels() {
                    let _ = writeln!(out, "  s{k}_awg_{} -> twc_{k}_{};", label.awg, label.group);
                }
            }
            None => {
                let _ = writeln!(out, "  {} -> twc_{k}_0;", source(0));
            }
        }
    }
    out.push_str("}\n");
    out
}
