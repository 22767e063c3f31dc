//! Self-routing, contention detection and the monotonic/concentrated
//! nonblocking conditions for `S(m,n)`.
//!
//! A request `R(S,D)` enters stage `k` at
//! `X_k = s_{n-k} .. s_1 d_n .. d_{n-k+1}`, leaves at `Y_k = rotate_left(X_k)`,
//! and boundary `k` overwrites the trailing field with `d_{n-k}`. After the
//! last boundary the channel address equals `D`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::addressing::{render_digits, FieldAddress};
use crate::error::{Error, Result};
use crate::sen::{check_dimensions, SenNetwork, TwcModule, DEFAULT_CHANNEL_LIMIT};

/// Default cap on the number of request sets `verify_theorem1` will enumerate.
pub const DEFAULT_SET_LIMIT: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Request {
    pub src: FieldAddress,
    pub dst: FieldAddress,
}

impl Request {
    pub fn new(src: FieldAddress, dst: FieldAddress) -> Result<Self> {
        if src.base() != dst.base() || src.width() != dst.width() {
            return Err(Error::Shape(format!(
                "source {src} and destination {dst} differ in base or width"
            )));
        }
        Ok(Request { src, dst })
    }

    pub fn parse(src: &str, dst: &str, m: usize) -> Result<Self> {
        Self::new(FieldAddress::parse(src, m)?, FieldAddress::parse(dst, m)?)
    }

    pub fn m(&self) -> usize {
        self.src.base()
    }

    pub fn n(&self) -> usize {
        self.src.width()
    }
}

impl fmt::Display for Request {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R({},{})", self.src, self.dst)
    }
}

/// One region of the path. For `stage < n` the request enters shuffle
/// stage `stage` at `input` and leaves at `output`; the record with
/// `stage == n` is the output stage, where `input == output == D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hop {
    pub stage: usize,
    pub input: FieldAddress,
    pub output: FieldAddress,
    pub wavelength: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub request: Request,
    pub hops: Vec<Hop>,
}

impl Route {
    pub fn wavelengths(&self) -> Vec<usize> {
        self.hops.iter().map(|h| h.wavelength).collect()
    }

    /// Channel reached after the last boundary.
    pub fn destination(&self) -> &FieldAddress {
        &self.hops.last().expect("a route has n + 1 hops").input
    }

    pub fn to_json(&self) -> serde_json::Value {
        let hops: Vec<_> = self
            .hops
            .iter()
            .map(|h| {
                serde_json::json!({
                    "stage": h.stage,
                    "in": h.input.to_string(),
                    "out": h.output.to_string(),
                    "lambda": h.wavelength,
                })
            })
            .collect();
        serde_json::json!({
            "src": self.request.src.to_string(),
            "dst": self.request.dst.to_string(),
            "hops": hops,
        })
    }

    /// Step-by-step chain with two-tuple and field forms of every channel.
    pub fn trace(&self) -> String {
        let n = self.request.n();
        let mut lines = vec![format!("{} in S({},{})", self.request, self.request.m(), n)];
        let mut rows: Vec<(String, String, String)> = Vec::new();
        for pair in self.hops.windows(2) {
            let (h, next) = (&pair[0], &pair[1]);
            rows.push((
                format!("W{}", h.stage),
                channel_text(&h.input, h.wavelength),
                channel_text(&h.output, h.wavelength),
            ));
            rows.push((
                format!("boundary {}", h.stage),
                channel_text(&h.output, h.wavelength),
                channel_text(&next.input, next.wavelength),
            ));
        }
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        for (label, from, to) in rows {
            lines.push(format!("{label:<width$}  {from} -> {to}"));
        }
        lines.push(String::new());
        lines.join("\n")
    }
}

/// `(fiber,λi) address`.
fn channel_text(addr: &FieldAddress, wavelength: usize) -> String {
    format!("({},λ{}) {}", fiber_label(addr), wavelength, addr)
}

/// Leading `n - 1` fields as text; `"0"` for a single-field address.
pub fn fiber_label(addr: &FieldAddress) -> String {
    let d = addr.digits();
    if d.len() < 2 {
        return "0".into();
    }
    render_digits(&d[..d.len() - 1], addr.base())
}

/// A partial permutation `π = {R_1 .. R_l}` on `S(m,n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RequestSet {
    m: usize,
    n: usize,
    requests: Vec<Request>,
}

#[derive(Serialize, Deserialize)]
struct RawRequest {
    src: String,
    dst: String,
}

#[derive(Serialize, Deserialize)]
struct RawSet {
    m: usize,
    n: usize,
    requests: Vec<RawRequest>,
}

impl RequestSet {
    pub fn new(m: usize, n: usize, requests: Vec<Request>) -> Result<Self> {
        let mut sources = HashSet::new();
        let mut destinations = HashSet::new();
        for r in &requests {
            for a in [&r.src, &r.dst] {
                if a.base() != m || a.width() != n {
                    return Err(Error::Shape(format!(
                        "request {r} does not fit S({m},{n})"
                    )));
                }
            }
            if !sources.insert(r.src.to_integer()) {
                return Err(Error::InvalidSet(format!("duplicate source {}", r.src)));
            }
            if !destinations.insert(r.dst.to_integer()) {
                return Err(Error::InvalidSet(format!("duplicate destination {}", r.dst)));
            }
        }
        Ok(RequestSet { m, n, requests })
    }

    pub fn from_pairs(m: usize, n: usize, pairs: &[(&str, &str)]) -> Result<Self> {
        let requests = pairs
            .iter()
            .map(|(s, d)| Request::parse(s, d, m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, n, requests)
    }

    /// `D = S` for every channel.
    pub fn identity(m: usize, n: usize) -> Result<Self> {
        let ports = check_dimensions(m, n, u64::MAX)?;
        let requests = (0..ports)
            .map(|v| {
                let a = FieldAddress::from_integer(v, m, n)?;
                Ok(Request { src: a.clone(), dst: a })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, n, requests)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSet =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("request set: {e}")))?;
        let requests = raw
            .requests
            .iter()
            .map(|r| Request::parse(&r.src, &r.dst, raw.m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(raw.m, raw.n, requests)
    }

    pub fn to_json(&self) -> String {
        let raw = RawSet {
            m: self.m,
            n: self.n,
            requests: self
                .requests
                .iter()
                .map(|r| RawRequest { src: r.src.to_string(), dst: r.dst.to_string() })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn requests(&self) -> &[Request] {
        &self.requests
    }

    pub fn len(&self) -> usize {
        self.requests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requests.is_empty()
    }

    /// `(source, destination)` flat integers sorted by source.
    fn sorted_pairs(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<_> = self
            .requests
            .iter()
            .map(|r| (r.src.to_integer(), r.dst.to_integer()))
            .collect();
        v.sort_unstable();
        v
    }
}

pub fn self_route(net: &SenNetwork, req: &Request) -> Result<Route> {
    net.check_address(&req.src)?;
    net.check_address(&req.dst)?;
    let n = net.n();
    let mut hops = Vec::with_capacity(n + 1);
    let mut x = req.src.clone();
    for k in 0..n {
        let (y, wavelength) = net.stage_connect(k, &x)?;
        let (next, _) = net.boundary_exchange(k, &y, req.dst.digits()[k])?;
        hops.push(Hop { stage: k, input: x, output: y, wavelength });
        x = next;
    }
    let wavelength = net.input_tuple(&x)?.wavelength;
    hops.push(Hop { stage: n, input: x.clone(), output: x, wavelength });
    Ok(Route { request: req.clone(), hops })
}

/// `i_k = [s_{n-k} + d_{n-k+1}]_m` for `k < n` (with `d_{n+1} = s_1`) and
/// `i_n = [d_n + d_1]_m`, computed without a network.
pub fn wavelength_sequence(req: &Request) -> Vec<usize> {
    let m = req.m();
    let n = req.n();
    if n == 1 {
        return vec![req.src.trailing(), req.dst.trailing()];
    }
    let s = |j: usize| req.src.digits()[n - j];
    let d = |j: usize| if j == n + 1 { s(1) } else { req.dst.digits()[n - j] };
    (0..n)
        .map(|k| (s(n - k) + d(n - k + 1)) % m)
        .chain(std::iter::once((d(n) + d(1)) % m))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Input,
    Output,
}

/// A wavelength on a fiber at one side of a stage. Stage `n` is the output
/// stage, which only has an input side.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ChannelRef {
    pub stage: usize,
    pub side: Side,
    pub fiber: String,
    pub wavelength: usize,
}

impl fmt::Display for ChannelRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Input => "input",
            Side::Output => "output",
        };
        write!(f, "{side} of W{}, fiber {}, λ{}", self.stage, self.fiber, self.wavelength)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contention {
    pub channel: ChannelRef,
    /// Indices into the request set, smaller first.
    pub offenders: (usize, usize),
}

impl fmt::Display for Contention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "contention at {}: requests {} and {}",
            self.channel, self.offenders.0, self.offenders.1
        )
    }
}

/// Every stage-side channel the route occupies, output stage last.
pub fn route_channels(route: &Route) -> Vec<ChannelRef> {
    let mut out = Vec::with_capacity(2 * route.hops.len());
    let n = route.hops.len() - 1;
    for h in &route.hops {
        out.push(ChannelRef {
            stage: h.stage,
            side: Side::Input,
            fiber: fiber_label(&h.input),
            wavelength: h.wavelength,
        });
        if h.stage < n {
            out.push(ChannelRef {
                stage: h.stage,
                side: Side::Output,
                fiber: fiber_label(&h.output),
                wavelength: h.wavelength,
            });
        }
    }
    out
}

fn check_set(net: &SenNetwork, set: &RequestSet) -> Result<()> {
    if set.m() != net.m() || set.n() != net.n() {
        return Err(Error::Shape(format!(
            "request set for S({},{}) applied to S({},{})",
            set.m(),
            set.n(),
            net.m(),
            net.n()
        )));
    }
    Ok(())
}

/// Number of requests on every occupied stage-side channel.
pub fn channel_loads(net: &SenNetwork, set: &RequestSet) -> Result<BTreeMap<ChannelRef, usize>> {
    check_set(net, set)?;
    let mut loads = BTreeMap::new();
    for req in set.requests() {
        for ch in route_channels(&self_route(net, req)?) {
            *loads.entry(ch).or_insert(0) += 1;
        }
    }
    Ok(loads)
}

/// Routes every request and reports each pair sharing a channel.
///
/// A stage is a bijection on channels, so two requests on the same output
/// channel of a stage already met on its input side; only the input-side
/// contention is reported for such a pair.
pub fn detect_contentions(net: &SenNetwork, set: &RequestSet) -> Result<Vec<Contention>> {
    check_set(net, set)?;
    let mut users: BTreeMap<ChannelRef, Vec<usize>> = BTreeMap::new();
    for (idx, req) in set.requests().iter().enumerate() {
        for ch in route_channels(&self_route(net, req)?) {
            users.entry(ch).or_default().push(idx);
        }
    }
    let mut met_at_input: HashSet<(usize, (usize, usize))> = HashSet::new();
    let mut found = Vec::new();
    // BTreeMap order puts the input side of a stage before its output side.
    for (channel, idx) in users {
        if idx.len() < 2 {
            continue;
        }
        for pair in idx.iter().copied().tuple_combinations::<(usize, usize)>() {
            match channel.side {
                Side::Input => {
                    met_at_input.insert((channel.stage, pair));
                }
                Side::Output if met_at_input.contains(&(channel.stage, pair)) => continue,
                Side::Output => {}
            }
            found.push(Contention { channel: channel.clone(), offenders: pair });
        }
    }
    found.sort_by(|a, b| (&a.channel, a.offenders).cmp(&(&b.channel, b.offenders)));
    Ok(found)
}

/// Destinations strictly increasing or strictly decreasing in source order.
pub fn is_monotonic(set: &RequestSet) -> bool {
    let pairs = set.sorted_pairs();
    let up = pairs.windows(2).all(|w| w[0].1 < w[1].1);
    let down = pairs.windows(2).all(|w| w[0].1 > w[1].1);
    up || down
}

/// Sources form a contiguous range of flat integers.
pub fn is_concentrated(set: &RequestSet) -> bool {
    set.sorted_pairs().windows(2).all(|w| w[1].0 == w[0].0 + 1)
}

/// TWC settings realizing a set of routes: `[boundary][fiber]`.
///
/// Each route demands that the module on the fiber of `Y_k` at boundary `k`
/// convert `λ_{i_k}` to `λ_{i_{k+1}}`. Demands the routes do not fix are
/// filled with the unused wavelengths in ascending order.
pub fn configure_boundaries(net: &SenNetwork, routes: &[Route]) -> Result<Vec<Vec<TwcModule>>> {
    let m = net.m();
    let fibers = net.fibers_per_side() as usize;
    let mut partial = vec![vec![vec![None::<usize>; m]; fibers]; net.n()];
    for route in routes {
        for pair in route.hops.windows(2) {
            let (h, next) = (&pair[0], &pair[1]);
            let fiber = if net.n() == 1 { 0 } else { h.output.fiber_index() as usize };
            let map = &mut partial[h.stage][fiber];
            let (from, to) = (h.wavelength, next.wavelength);
            let clash = match map[from] {
                Some(t) => t != to,
                None => map.contains(&Some(to)),
            };
            if clash {
                return Err(Error::TwcConflict(format!(
                    "boundary {} fiber {}: {} needs λ{from} -> λ{to}, module already maps {:?}",
                    h.stage,
                    fiber_label(&h.output),
                    route.request,
                    map
                )));
            }
            map[from] = Some(to);
        }
    }
    partial
        .into_iter()
        .map(|column| {
            column
                .into_iter()
                .map(|map| {
                    let used: BTreeSet<usize> = map.iter().flatten().copied().collect();
                    let mut free = (0..m).filter(|w| !used.contains(w));
                    let full = map
                        .iter()
                        .map(|t| t.unwrap_or_else(|| free.next().expect("counts match")))
                        .collect();
                    TwcModule::new(full)
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub m: usize,
    pub n: usize,
    pub sets_tested: u64,
    pub violations: u64,
    /// Smallest violating set in enumeration order, if any.
    pub witness: Option<Vec<String>>,
}

impl VerificationReport {
    fn empty(m: usize, n: usize) -> Self {
        VerificationReport { m, n, sets_tested: 0, violations: 0, witness: None }
    }

    fn merge(mut self, other: Self) -> Self {
        self.sets_tested += other.sets_tested;
        self.violations += other.violations;
        self.witness = match (self.witness, other.witness) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Monotonic and concentrated sets on `N` ports: every window of `l`
/// consecutive sources, times `C(N,l)` increasing plus `C(N,l)` decreasing
/// destination choices, with the two orders coinciding at `l = 1`.
pub fn conforming_set_count(ports: u64) -> u128 {
    let big_n = ports as u128;
    (1..=big_n)
        .map(|l| {
            let windows = big_n - l + 1;
            let orders = if l == 1 { 1 } else { 2 };
            windows * orders * binomial(big_n, l)
        })
        .sum()
}

pub fn verify_theorem1(m: usize, n: usize) -> Result<VerificationReport> {
    verify_theorem1_with_limits(m, n, DEFAULT_CHANNEL_LIMIT, DEFAULT_SET_LIMIT)
}

/// Routes every monotonic and concentrated request set of `S(m,n)` and
/// counts the sets with at least one contention.
pub fn verify_theorem1_with_limits(
    m: usize,
    n: usize,
    channel_limit: u64,
    set_limit: u128,
) -> Result<VerificationReport> {
    let ports = check_dimensions(m, n, channel_limit)?;
    let required = conforming_set_count(ports);
    if required > set_limit {
        return Err(Error::ResourceGuard {
            what: "monotonic and concentrated request sets",
            required,
            limit: set_limit,
        });
    }
    let net = crate::sen::build_sen_with_limit(m, n, channel_limit)?;
    let addrs: Vec<FieldAddress> = net.addresses().collect();
    let windows: Vec<(usize, usize)> = (1..=addrs.len())
        .flat_map(|len| (0..=addrs.len() - len).map(move |start| (start, len)))
        .collect();
    windows
        .par_iter()
        .map(|&(start, len)| {
            let mut report = VerificationReport::empty(m, n);
            for dsts in (0..addrs.len()).combinations(len) {
                let orders: &[bool] = if len == 1 { &[false] } else { &[false, true] };
                for &reverse in orders {
                    let requests = (start..start + len)
                        .zip(dst_order(&dsts, reverse))
                        .map(|(s, d)| Request { src: addrs[s].clone(), dst: addrs[d].clone() })
                        .collect();
                    let set = RequestSet::new(m, n, requests)?;
                    report.sets_tested += 1;
                    if !detect_contentions(&net, &set)?.is_empty() {
                        report.violations += 1;
                        let text = set.requests().iter().map(Request::to_string).collect();
                        report.witness = Some(match report.witness.take() {
                            Some(w) => std::cmp::min(w, text),
                            None => text,
                        });
                    }
                }
            }
            Ok(report)
        })
        .try_reduce(|| VerificationReport::empty(m, n), |a, b| Ok(a.merge(b)))
}

fn dst_order(dsts: &[usize], reverse: bool) -> Vec<usize> {
    if reverse {
        dsts.iter().rev().copied().collect()
    } else {
        dsts.to_vec()
    }
}

/// Busy channels over all channels, summed over both sides of every shuffle
/// stage, when all `m^n` inputs are active with `D = S`.
pub fn full_load_utilization(net: &SenNetwork) -> Result<Ratio<u64>> {
    let set = RequestSet::identity(net.m(), net.n())?;
    let loads = channel_loads(net, &set)?;
    let busy = loads.keys().filter(|ch| ch.stage < net.n()).count() as u64;
    let total = 2 * net.n() as u64 * net.port_count();
    Ok(Ratio::new(busy, total))
}

#[cfg(test)]
mod tests {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::sen::build_sen;

    fn a(text: &str) -> FieldAddress {
        FieldAddress::parse(text, 3).unwrap()
    }

    fn seven_request_set() -> RequestSet {
        RequestSet::from_pairs(
            3,
            3,
            &[
                ("011", "000"),
                ("012", "002"),
                ("020", "010"),
                ("021", "011"),
                ("022", "012"),
                ("100", "021"),
                ("101", "022"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn route_of_first_example() {
        let net = build_sen(3, 3).unwrap();
        let route = self_route(&net, &Request::parse("010", "111", 3).unwrap()).unwrap();
        let chain: Vec<_> = route
            .hops
            .iter()
            .map(|h| (h.input.to_string(), h.output.to_string(), h.wavelength))
            .collect();
        assert_eq!(
            chain,
            [
                ("010".into(), "100".into(), 0),
                ("101".into(), "011".into(), 2),
                ("011".into(), "110".into(), 1),
                ("111".into(), "111".into(), 2),
            ]
        );
        assert_eq!(route.destination(), &a("111"));
    }

    #[test]
    fn route_of_identity_request() {
        let net = build_sen(3, 3).unwrap();
        let route = self_route(&net, &Request::parse("000", "000", 3).unwrap()).unwrap();
        assert!(route.wavelengths().iter().all(|&w| w == 0));
        assert!(route.hops.iter().all(|h| h.input == a("000") && h.output == a("000")));
    }

    #[test]
    fn route_of_contending_request() {
        let net = build_sen(3, 3).unwrap();
        let route = self_route(&net, &Request::parse("011", "000", 3).unwrap()).unwrap();
        assert_eq!(route.hops[2].input, a("100"));
        assert_eq!(route.hops[2].wavelength, 1);
    }

    #[test]
    fn route_rejects_mismatched_request() {
        let net = build_sen(3, 3).unwrap();
        let req = Request::parse("01", "11", 3).unwrap();
        assert!(matches!(self_route(&net, &req), Err(Error::Shape(_))));
        assert!(Request::parse("010", "11", 3).is_err());
    }

    #[test]
    fn wavelength_sequence_examples() {
        assert_eq!(wavelength_sequence(&Request::parse("010", "111", 3).unwrap()), [0, 2, 1, 2]);
        assert_eq!(wavelength_sequence(&Request::parse("101", "002", 3).unwrap()), [2, 0, 1, 2]);
        for m in 2..=5 {
            let z = FieldAddress::zero(m, 4).unwrap();
            let r = Request::new(z.clone(), z).unwrap();
            assert_eq!(wavelength_sequence(&r), [0; 5]);
        }
    }

    #[test]
    fn routes_reach_destination_and_match_closed_form() {
        for m in 2..=3 {
            for n in 1..=3 {
                let net = build_sen(m, n).unwrap();
                for s in net.addresses() {
                    for d in net.addresses() {
                        let req = Request::new(s.clone(), d.clone()).unwrap();
                        let route = self_route(&net, &req).unwrap();
                        assert_eq!(route.hops.len(), n + 1);
                        assert_eq!(route.hops[0].input, s);
                        assert_eq!(route.destination(), &d);
                        assert_eq!(route.wavelengths(), wavelength_sequence(&req));
                        for (k, h) in route.hops.iter().enumerate().take(n) {
                            assert_eq!(h.output, h.input.rotate_left());
                            // X_k = s_{n-k} .. s_1 d_n .. d_{n-k+1}
                            let expect: Vec<usize> = s.digits()[k..]
                                .iter()
                                .chain(&d.digits()[..k])
                                .copied()
                                .collect();
                            assert_eq!(h.input.digits(), &expect[..]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn contention_pair() {
        let net = build_sen(3, 3).unwrap();
        let set = RequestSet::from_pairs(3, 3, &[("011", "000"), ("101", "002")]).unwrap();
        let found = detect_contentions(&net, &set).unwrap();
        assert_eq!(found.len(), 1);
        let c = &found[0];
        assert_eq!(c.channel.stage, 2);
        assert_eq!(c.channel.side, Side::Input);
        assert_eq!(c.channel.fiber, "10");
        assert_eq!(c.channel.wavelength, 1);
        assert_eq!(c.offenders, (0, 1));
        assert_eq!(c.to_string(), "contention at input of W2, fiber 10, λ1: requests 0 and 1");
        assert!(!is_monotonic(&set) || !is_concentrated(&set));
    }

    #[test]
    fn singleton_has_no_contention() {
        let net = build_sen(3, 3).unwrap();
        let set = RequestSet::from_pairs(3, 3, &[("012", "210")]).unwrap();
        assert!(detect_contentions(&net, &set).unwrap().is_empty());
        assert!(is_monotonic(&set) && is_concentrated(&set));
    }

    #[test]
    fn seven_request_set_is_conforming_and_contention_free() {
        let net = build_sen(3, 3).unwrap();
        let set = seven_request_set();
        assert!(is_monotonic(&set));
        assert!(is_concentrated(&set));
        let srcs: Vec<u64> = set.requests().iter().map(|r| r.src.to_integer()).collect();
        assert_eq!(srcs, (4..=10).collect::<Vec<_>>());
        assert!(detect_contentions(&net, &set).unwrap().is_empty());
        let routes: Vec<_> = set.requests().iter().map(|r| self_route(&net, r).unwrap()).collect();
        assert!(configure_boundaries(&net, &routes).is_ok());
    }

    #[test]
    fn predicate_examples() {
        assert!(matches!(
            RequestSet::from_pairs(3, 3, &[("000", "001"), ("001", "001")]),
            Err(Error::InvalidSet(_))
        ));
        assert!(matches!(
            RequestSet::from_pairs(3, 3, &[("000", "001"), ("000", "002")]),
            Err(Error::InvalidSet(_))
        ));
        let gap = RequestSet::from_pairs(3, 3, &[("000", "001"), ("002", "002")]).unwrap();
        assert!(!is_concentrated(&gap));
        assert!(is_monotonic(&gap));
        let down = RequestSet::from_pairs(3, 3, &[("001", "002"), ("000", "100")]).unwrap();
        assert!(is_monotonic(&down));
        let zigzag =
            RequestSet::from_pairs(2, 2, &[("00", "01"), ("01", "00"), ("10", "11")]).unwrap();
        assert!(!is_monotonic(&zigzag));
        assert!(is_concentrated(&zigzag));
    }

    #[test]
    fn twc_setting_on_contending_route() {
        let net = build_sen(3, 3).unwrap();
        let r1 = self_route(&net, &Request::parse("011", "000", 3).unwrap()).unwrap();
        let cols = configure_boundaries(&net, std::slice::from_ref(&r1)).unwrap();
        let fiber_10 = a("100").fiber_index() as usize;
        assert_eq!(cols[1][fiber_10].apply(1).unwrap(), 1);

        let r2 = self_route(&net, &Request::parse("101", "002", 3).unwrap()).unwrap();
        assert!(matches!(configure_boundaries(&net, &[r1, r2]), Err(Error::TwcConflict(_))));
    }

    #[test]
    fn set_json_round_trip() {
        let set = seven_request_set();
        let back = RequestSet::from_json(&set.to_json()).unwrap();
        assert_eq!(back, set);
        let text = r#"{"m":3,"n":3,"requests":[{"src":"011","dst":"000"},{"src":"101","dst":"002"}]}"#;
        assert_eq!(RequestSet::from_json(text).unwrap().len(), 2);
        assert!(matches!(RequestSet::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn route_json_and_trace() {
        let net = build_sen(3, 3).unwrap();
        let route = self_route(&net, &Request::parse("010", "111", 3).unwrap()).unwrap();
        let json = route.to_json();
        assert_eq!(json["hops"][1]["in"], "101");
        assert_eq!(json["hops"][1]["lambda"], 2);
        assert_eq!(
            route.trace(),
            "R(010,111) in S(3,3)\n\
             W0          (01,λ0) 010 -> (10,λ0) 100\n\
             boundary 0  (10,λ0) 100 -> (10,λ2) 101\n\
             W1          (10,λ2) 101 -> (01,λ2) 011\n\
             boundary 1  (01,λ2) 011 -> (01,λ1) 011\n\
             W2          (01,λ1) 011 -> (11,λ1) 110\n\
             boundary 2  (11,λ1) 110 -> (11,λ2) 111\n"
        );
    }

    fn random_set(rng: &mut ChaCha8Rng, m: usize, n: usize) -> RequestSet {
        let ports = (m as u64).pow(n as u32);
        let mut srcs: Vec<u64> = (0..ports).collect();
        let mut dsts = srcs.clone();
        srcs.shuffle(rng);
        dsts.shuffle(rng);
        let l = rng.random_range(2..=ports as usize);
        let requests = srcs[..l]
            .iter()
            .zip(&dsts[..l])
            .map(|(&s, &d)| {
                Request::new(
                    FieldAddress::from_integer(s, m, n).unwrap(),
                    FieldAddress::from_integer(d, m, n).unwrap(),
                )
                .unwrap()
            })
            .collect();
        RequestSet::new(m, n, requests).unwrap()
    }

    #[test]
    fn detection_ignores_request_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (m, n) in [(2, 3), (3, 3)] {
            let net = build_sen(m, n).unwrap();
            for _ in 0..50 {
                let set = random_set(&mut rng, m, n);
                let mut shuffled = set.requests().to_vec();
                shuffled.shuffle(&mut rng);
                let other = RequestSet::new(m, n, shuffled).unwrap();
                let keyed = |s: &RequestSet| -> BTreeSet<(ChannelRef, BTreeSet<String>)> {
                    detect_contentions(&net, s)
                        .unwrap()
                        .into_iter()
                        .map(|c| {
                            let who = [c.offenders.0, c.offenders.1]
                                .iter()
                                .map(|&i| s.requests()[i].to_string())
                                .collect();
                            (c.channel, who)
                        })
                        .collect()
                };
                assert_eq!(keyed(&set), keyed(&other));
            }
        }
    }

    #[test]
    fn colliding_pairs_span_distant_sources() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = 0;
        for (m, n) in [(2, 3), (3, 3), (2, 4), (3, 2)] {
            let net = build_sen(m, n).unwrap();
            for _ in 0..200 {
                let set = random_set(&mut rng, m, n);
                for c in detect_contentions(&net, &set).unwrap() {
                    assert_eq!(c.channel.side, Side::Input);
                    let j = c.channel.stage;
                    assert!(j >= 1 && j < n);
                    let (r, r2) = (&set.requests()[c.offenders.0], &set.requests()[c.offenders.1]);
                    let span = (m as u64).pow((n - j) as u32);
                    assert!(r.src.to_integer().abs_diff(r2.src.to_integer()) >= span);
                    assert!(r.dst.to_integer().abs_diff(r2.dst.to_integer()) < span);
                    seen += 1;
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn exhaustive_small_cases() {
        for (m, n) in [(2, 1), (3, 1), (2, 2)] {
            let report = verify_theorem1(m, n).unwrap();
            assert_eq!(report.violations, 0, "S({m},{n})");
            assert_eq!(
                report.sets_tested as u128,
                conforming_set_count((m as u64).pow(n as u32))
            );
        }
    }

    #[test]
    fn verification_guard() {
        assert!(matches!(verify_theorem1(3, 3), Err(Error::ResourceGuard { .. })));
        assert!(matches!(
            verify_theorem1_with_limits(2, 2, 2, DEFAULT_SET_LIMIT),
            Err(Error::ResourceGuard { .. })
        ));
    }

    #[test]
    fn full_load() {
        for (m, n) in [(2, 1), (2, 2), (2, 3), (3, 3)] {
            let net = build_sen(m, n).unwrap();
            assert_eq!(full_load_utilization(&net).unwrap(), Ratio::from_integer(1));
        }
    }
}
