//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::collections::HashMap;
use std::io::Write;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use awg_sen::awg::{build_connectivity_table, AwgSpec};
use awg_sen::metrics::compute_metrics;
use awg_sen::rwa::{
    channel_loads, detect_contentions, full_load_utilization, is_concentrated, is_monotonic,
    self_route, verify_theorem1, wavelength_sequence, Request, RequestSet, Side,
};
use awg_sen::sen::build_sen;
use awg_sen::shuffle::{
    build_modular_table, build_w, check_contention_free, check_equivalence, validate_modular_table,
};
use num_rational::Ratio;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn cli(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_awg-sen"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn awg-sen");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("awg-sen output")
}

fn stdout_of(args: &[&str]) -> Result<String, String> {
    let out = cli(args, None);
    ensure!(
        out.status.success(),
        "awg-sen {} exited with {:?}: {}",
        args.join(" "),
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

// Routing table of A(3,6), transcribed.
const ROUTING_A36_CSV: &str = "0,1,2,3,4,5\n\
                           0,1,2,3,4,5\n\
                           1,2,3,4,5,0\n\
                           2,3,4,5,0,1\n";

fn ac1_routing_a36() -> Check {
    let out = stdout_of(&["table", "--m", "3", "--l", "6"])?;
    ensure!(out == ROUTING_A36_CSV, "T_A csv differs:\n{out}");
    Ok("18 cells byte-exact".into())
}

fn ac2_routing_w36() -> Check {
    let expected = "| p\\(a,q') | (0,0) | (0,1) | (0,2) | (1,0) | (1,1) | (1,2) |\n\
                    |---|---|---|---|---|---|---|\n\
                    | 0 | λ0 | λ1 | λ2 | λ0 | λ1 | λ2 |\n\
                    | 1 | λ1 | λ2 | λ0 | λ1 | λ2 | λ0 |\n\
                    | 2 | λ2 | λ0 | λ1 | λ2 | λ0 | λ1 |\n";
    let out = stdout_of(&["table", "--m", "3", "--r", "2", "--format", "markdown"])?;
    ensure!(out == expected, "T_C markdown differs:\n{out}");
    let csv = stdout_of(&["table", "--m", "3", "--r", "2"])?;
    let rows = csv_rows(&csv);
    ensure!(
        rows[0] == ["(0,0)", "(0,1)", "(0,2)", "(1,0)", "(1,1)", "(1,2)"],
        "T_C csv header {:?}",
        rows[0]
    );
    ensure!(rows[1..] == [["0", "1", "2", "0", "1", "2"], ["1", "2", "0", "1", "2", "0"], ["2", "0", "1", "2", "0", "1"]], "T_C csv body {rows:?}");
    Ok("18 cells and (a,q') labels".into())
}

// Connectivity tables of A(3,6) and W(3,6), transcribed row by row.
const CONNECTIVITY_A36: [[&str; 6]; 3] = [
    ["00,00", "01,10", "02,20", "03,30", "04,40", "05,50"],
    ["10,01", "11,11", "12,21", "13,31", "14,41", "15,51"],
    ["20,02", "21,12", "22,22", "23,32", "24,42", "25,52"],
];

const CONNECTIVITY_W36: [[&str; 6]; 3] = [
    ["000,000", "001,010", "002,020", "010,100", "011,110", "012,120"],
    ["100,001", "101,011", "102,021", "110,101", "111,111", "112,121"],
    ["200,002", "201,012", "202,022", "210,102", "211,112", "212,122"],
];

fn ac3_connectivity() -> Check {
    let b = csv_rows(&stdout_of(&["table", "--m", "3", "--l", "6", "--kind", "connectivity"])?);
    let d = csv_rows(&stdout_of(&["table", "--m", "3", "--r", "2", "--kind", "connectivity"])?);
    for (name, rows, golden) in [("T_B", &b, &CONNECTIVITY_A36), ("T_D", &d, &CONNECTIVITY_W36)] {
        ensure!(rows.len() == 4, "{name} has {} csv records", rows.len());
        for (p, row) in golden.iter().enumerate() {
            ensure!(rows[p + 1] == row, "{name} row {p}: {:?} vs {:?}", rows[p + 1], row);
        }
    }
    ensure!(d[3][1] == "201,012", "T_D (2,(0,1)) = {}", d[3][1]);
    let spec = AwgSpec::new(3, 6).map_err(|e| e.to_string())?;
    let tb = build_connectivity_table(&spec);
    let (i, o) = tb.get(1, 4);
    ensure!((i.to_string(), o.to_string()) == ("14".into(), "41".into()), "T_B(1,4)");
    Ok("36 connectivity cells".into())
}

fn ac4_route() -> Check {
    let json = stdout_of(&[
        "route", "--m", "3", "--n", "3", "--src", "010", "--dst", "111", "--format", "json",
    ])?;
    let v: serde_json::Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    let hops: Vec<(String, String, u64)> = v["hops"]
        .as_array()
        .ok_or("no hops")?
        .iter()
        .map(|h| {
            (
                h["in"].as_str().unwrap_or("").to_string(),
                h["out"].as_str().unwrap_or("").to_string(),
                h["lambda"].as_u64().unwrap_or(u64::MAX),
            )
        })
        .collect();
    let expected = [("010", "100", 0), ("101", "011", 2), ("011", "110", 1), ("111", "111", 2)];
    ensure!(hops.len() == 4, "{} hops", hops.len());
    for (got, want) in hops.iter().zip(expected) {
        ensure!(
            (got.0.as_str(), got.1.as_str(), got.2) == want,
            "hop {got:?}, expected {want:?}"
        );
    }
    let text = stdout_of(&["route", "--m", "3", "--n", "3", "--src", "010", "--dst", "111"])?;
    for line in [
        "W0          (01,λ0) 010 -> (10,λ0) 100",
        "boundary 0  (10,λ0) 100 -> (10,λ2) 101",
        "W1          (10,λ2) 101 -> (01,λ2) 011",
        "boundary 1  (01,λ2) 011 -> (01,λ1) 011",
        "W2          (01,λ1) 011 -> (11,λ1) 110",
        "boundary 2  (11,λ1) 110 -> (11,λ2) 111",
    ] {
        ensure!(text.lines().any(|l| l == line), "trace lacks {line:?}:\n{text}");
    }
    Ok("λ0, λ2, λ1, λ2".into())
}

fn ac5_contention() -> Check {
    let net = build_sen(3, 3).map_err(|e| e.to_string())?;
    let set = RequestSet::from_pairs(3, 3, &[("011", "000"), ("101", "002")])
        .map_err(|e| e.to_string())?;
    let found = detect_contentions(&net, &set).map_err(|e| e.to_string())?;
    ensure!(found.len() == 1, "{} contentions: {found:?}", found.len());
    let c = &found[0].channel;
    ensure!(
        c.stage == 2 && c.side == Side::Input && c.fiber == "10" && c.wavelength == 1,
        "contention at {c}"
    );
    let out = cli(&["check", "--set", "-"], Some(&set.to_json()));
    ensure!(out.status.code() == Some(2), "check exit code {:?}", out.status.code());
    Ok(found[0].to_string())
}

fn ac6_seven_requests() -> Check {
    let net = build_sen(3, 3).map_err(|e| e.to_string())?;
    let set = RequestSet::from_pairs(
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
    .map_err(|e| e.to_string())?;
    ensure!(is_monotonic(&set), "not monotonic");
    ensure!(is_concentrated(&set), "not concentrated");
    let found = detect_contentions(&net, &set).map_err(|e| e.to_string())?;
    ensure!(found.is_empty(), "contentions {found:?}");
    // R1, R4 and R7 share a fiber into W2 on different wavelengths.
    let at_w2: Vec<_> = [0, 3, 6]
        .iter()
        .map(|&i| {
            let h = &self_route(&net, &set.requests()[i]).unwrap().hops[2];
            (h.input.fiber_index(), h.wavelength)
        })
        .collect();
    ensure!(
        at_w2.iter().all(|x| x.0 == at_w2[0].0) && at_w2[0].1 != at_w2[1].1
            && at_w2[1].1 != at_w2[2].1 && at_w2[0].1 != at_w2[2].1,
        "R1/R4/R7 at W2: {at_w2:?}"
    );
    let out = cli(&["check", "--set", "-"], Some(&set.to_json()));
    ensure!(out.status.code() == Some(0), "check exit code {:?}", out.status.code());
    Ok("7 requests, 0 contentions".into())
}

fn ac7_properties() -> Check {
    let mut cases = 0;
    for m in 2..=4 {
        for r in 1..=4 {
            let w = build_w(m, r).map_err(|e| e.to_string())?;
            ensure!(check_equivalence(&w), "W({m},{}) not equivalent", r * m);
            ensure!(check_contention_free(&w), "W({m},{}) has contention", r * m);
            let t = build_modular_table(m, r).map_err(|e| e.to_string())?;
            let report = validate_modular_table(&t);
            ensure!(report.all_passed(), "T_C({m},{r}) fails {report:?}");
            cases += 1;
        }
    }
    Ok(format!("{cases} fabrics"))
}

/// Counts monotonic and concentrated sets on `ports` channels by scanning
/// every (source subset, destination subset) pair.
fn conforming_count_by_masks(ports: u32) -> u64 {
    let mut count = 0;
    for src in 1u32..(1 << ports) {
        let contiguous = (src >> src.trailing_zeros()).count_ones()
            == 32 - (src >> src.trailing_zeros()).leading_zeros();
        if !contiguous {
            continue;
        }
        let l = src.count_ones();
        for dst in 1u32..(1 << ports) {
            if dst.count_ones() == l {
                count += if l == 1 { 1 } else { 2 };
            }
        }
    }
    count
}

/// Counts by trying every partial injection and testing both conditions.
fn conforming_count_brute(ports: usize) -> u64 {
    fn go(ports: usize, next_src: usize, pairs: &mut Vec<(usize, usize)>, used: &mut Vec<bool>, count: &mut u64) {
        if next_src == ports {
            if pairs.is_empty() {
                return;
            }
            let contiguous = pairs.windows(2).all(|w| w[1].0 == w[0].0 + 1);
            let inc = pairs.windows(2).all(|w| w[0].1 < w[1].1);
            let dec = pairs.windows(2).all(|w| w[0].1 > w[1].1);
            if contiguous && (inc || dec) {
                *count += 1;
            }
            return;
        }
        go(ports, next_src + 1, pairs, used, count);
        for d in 0..ports {
            if !used[d] {
                used[d] = true;
                pairs.push((next_src, d));
                go(ports, next_src + 1, pairs, used, count);
                pairs.pop();
                used[d] = false;
            }
        }
    }
    let mut count = 0;
    go(ports, 0, &mut Vec::new(), &mut vec![false; ports], &mut count);
    count
}

fn ac8_nonblocking() -> Check {
    let mut notes = Vec::new();
    for (m, n) in [(2usize, 2usize), (2, 3), (3, 2)] {
        let report = verify_theorem1(m, n).map_err(|e| e.to_string())?;
        let ports = (m as u32).pow(n as u32);
        let oracle = conforming_count_by_masks(ports);
        ensure!(report.violations == 0, "S({m},{n}): {} violations, e.g. {:?}", report.violations, report.witness);
        ensure!(report.sets_tested == oracle, "S({m},{n}): tested {} sets, oracle {oracle}", report.sets_tested);
        if ports <= 4 {
            let brute = conforming_count_brute(ports as usize);
            ensure!(brute == oracle, "S({m},{n}): brute force {brute}, mask count {oracle}");
        }
        notes.push(format!("S({m},{n}) {} sets", report.sets_tested));
    }
    Ok(notes.join(", "))
}

fn ac9_utilization() -> Check {
    for (m, n) in [(2, 2), (2, 3), (3, 3)] {
        let net = build_sen(m, n).map_err(|e| e.to_string())?;
        let u = full_load_utilization(&net).map_err(|e| e.to_string())?;
        ensure!(u == Ratio::from_integer(1), "S({m},{n}) utilization {u}");
        let set = RequestSet::identity(m, n).map_err(|e| e.to_string())?;
        let loads = channel_loads(&net, &set).map_err(|e| e.to_string())?;
        let mut per_side: HashMap<(usize, Side), u64> = HashMap::new();
        for (ch, load) in &loads {
            ensure!(*load == 1, "S({m},{n}) channel {ch} carries {load}");
            *per_side.entry((ch.stage, ch.side)).or_default() += 1;
        }
        for k in 0..n {
            for side in [Side::Input, Side::Output] {
                let busy = per_side.get(&(k, side)).copied().unwrap_or(0);
                ensure!(busy == net.port_count(), "S({m},{n}) stage {k} {side:?}: {busy} busy");
            }
        }
    }
    Ok("S(2,2), S(2,3), S(3,3) at 1".into())
}

fn ac10_metrics() -> Check {
    let report = compute_metrics(&build_w(3, 2).map_err(|e| e.to_string())?);
    ensure!(report.internal_fiber_count == 6, "internal fibers {}", report.internal_fiber_count);
    ensure!(report.classical_fiber_count == 18, "classical fibers {}", report.classical_fiber_count);
    for m in 2..=40 {
        let flag = compute_metrics(&build_w(m, 1).map_err(|e| e.to_string())?).crosstalk_flag;
        ensure!(flag == (m > 32), "crosstalk flag {flag} at m = {m}");
    }
    Ok("6 vs 18 fibers, flag from m = 33".into())
}

fn ac11_totality() -> Check {
    let net = build_sen(3, 3).map_err(|e| e.to_string())?;
    let mut pairs = 0;
    for s in net.addresses() {
        for d in net.addresses() {
            let req = Request::new(s.clone(), d.clone()).map_err(|e| e.to_string())?;
            let route = self_route(&net, &req).map_err(|e| e.to_string())?;
            ensure!(route.destination() == &d, "{req} ends at {}", route.destination());
            ensure!(route.wavelengths() == wavelength_sequence(&req), "{req} wavelengths differ");
            pairs += 1;
        }
    }
    ensure!(pairs == 729, "{pairs} pairs");
    Ok("729 pairs".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("AC1 routing table of A(3,6)", ac1_routing_a36, Duration::from_secs(1)),
        ("AC2 routing table of W(3,6)", ac2_routing_w36, Duration::from_secs(1)),
        ("AC3 connectivity tables of A(3,6) and W(3,6)", ac3_connectivity, Duration::from_secs(1)),
        ("AC4 self-routing chain R(010,111)", ac4_route, Duration::from_secs(1)),
        ("AC5 contention regression", ac5_contention, Duration::from_secs(1)),
        ("AC6 seven-request conforming set", ac6_seven_requests, Duration::from_secs(1)),
        ("AC7 equivalence, contention-freedom, legitimacy", ac7_properties, Duration::from_secs(10)),
        ("AC8 exhaustive nonblocking verification", ac8_nonblocking, Duration::from_secs(60)),
        ("AC9 full-load utilization", ac9_utilization, Duration::from_secs(5)),
        ("AC10 metric identities", ac10_metrics, Duration::from_secs(1)),
        ("AC11 self-routing totality in S(3,3)", ac11_totality, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(note) if elapsed > budget => Err(format!("{note}; took {elapsed:?}, budget {budget:?}")),
            other => other,
        };
        match result {
            Ok(note) => println!("PASS  {name}: {note} ({} ms)", elapsed.as_millis()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why} ({} ms)", elapsed.as_millis());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
