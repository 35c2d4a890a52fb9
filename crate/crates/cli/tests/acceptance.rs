//! End-to-end acceptance run: one PASS/FAIL line per criterion, exit status
//! nonzero when any criterion fails.

use std::collections::HashSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use symdyn::complexity::bits::{self_delimiting_len, Bits};
use symdyn::complexity::freq::{freq_bound, freq_code_len, freq_decode, freq_encode, letter_counts};
use symdyn::complexity::{lz78_decode, lz78_encode, rate_series, repair_bound, repair_decode, repair_encode, Estimator};
use symdyn::folner::{
    builtin_sequences, defect, defect_report, description_bits, geometric_modesty_check, temperedness_constant,
    FolnerSequence,
};
use symdyn::quasitiling::{cover, plan, verify_cover, PlanOptions, TilingPlan};
use symdyn::setcodec::{decode, encode_connected, random_connected_subset};
use symdyn::stochastic::{shannon_entropy, Measure, SampledSource, SplitMix64};
use symdyn::symbolic::sft::count_transfer;
use symdyn::symbolic::{q_count_bound, topological_entropy_estimate, Sft};
use symdyn::{FiniteSubset, Group, GroupElement, Point, Rational, Symbol};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn boundary_size(group: &Group, set: &FiniteSubset) -> usize {
    let points: HashSet<Point> = group.subset_points(set).unwrap().into_iter().collect();
    let mut outside = HashSet::new();
    for &p in &points {
        for &s in group.generator_points() {
            let q = group.mul_points(s, p).unwrap();
            if !points.contains(&q) {
                outside.insert(q);
            }
        }
    }
    outside.len()
}

fn codec_exactness() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for group in [Group::z(), Group::z2(), Group::heisenberg()] {
        for k in 0..1000u64 {
            let size = 1 + (k as usize * 7919) % 200;
            let t = random_connected_subset(&group, size, k).map_err(|e| e.to_string())?;
            let bits = encode_connected(&group, &t).map_err(|e| e.to_string())?;
            if decode(&group, &bits).map_err(|e| e.to_string())? != t {
                return Err(format!("{} seed {k}: roundtrip differs", group.id()));
            }
            let expected = t.len() + boundary_size(&group, &t);
            if bits.len() != expected {
                return Err(format!("{} seed {k}: {} bits, expected {expected}", group.id(), bits.len()));
            }
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(30), format!("{cases} sets exact in {:.1}s (limit 30s)", elapsed.as_secs_f64()))
}

fn hand_traces() -> Outcome {
    let z = Group::z();
    let zero = FiniteSubset::singleton(GroupElement::IDENTITY);
    let pair = z.subset_from_points([Point::new1(0), Point::new1(1)]).unwrap();
    let a = symdyn::complexity::bits::bits_to_string(&encode_connected(&z, &zero).unwrap());
    let b = symdyn::complexity::bits::bits_to_string(&encode_connected(&z, &pair).unwrap());
    check(a == "100" && b == "1100", format!("{{0}} -> {a}, {{0,+1}} -> {b}"))
}

fn heisenberg_outside(n: i64, g: (i64, i64, i64)) -> usize {
    let cells: HashSet<(i64, i64, i64)> =
        (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n * n).map(move |c| (a, b, c)))).collect();
    cells
        .iter()
        .filter(|&&(a, b, c)| !cells.contains(&(g.0 + a, g.1 + b, g.2 + c + g.0 * b)))
        .count()
}

fn folner_defects() -> Outcome {
    for d in 1..=3u8 {
        let group = Group::lattice(d).unwrap();
        let seq = FolnerSequence::boxes(&group);
        for n in 2..=64 {
            let report = defect_report(&seq, n).map_err(|e| e.to_string())?;
            if report.per_generator.iter().any(|&x| x != Rational::new(1, n as i128)) {
                return Err(format!("Z^{d} side {n}: {:?}", report.per_generator));
            }
        }
    }
    let h = Group::heisenberg();
    let seq = FolnerSequence::boxes(&h);
    for n in 2..=8 {
        let set = seq.set(n).unwrap();
        for &s in h.generator_points() {
            let got = defect(&h, &set, h.encode(s).unwrap()).unwrap();
            let want = Rational::new(heisenberg_outside(n as i64, (s.0[0], s.0[1], s.0[2])) as i128, (n as i128).pow(4));
            if got != want {
                return Err(format!("H3 side {n} generator {s:?}: {got} vs {want}"));
            }
        }
    }
    Ok("Z, Z2, Z3 sides 2..64 give 1/n; H3 sides 2..8 match direct counts".into())
}

fn temperedness() -> Outcome {
    let seq = FolnerSequence::dyadic(&Group::z());
    let mut best = Rational::from_integer(1);
    for i in 1..=12u32 {
        let mut union = HashSet::new();
        for j in 0..i {
            for a in 0..1i64 << j {
                for b in 0..1i64 << i {
                    union.insert(b - a);
                }
            }
        }
        best = best.max(Rational::new(union.len() as i128, 1 << i));
    }
    let k = temperedness_constant(&seq, 12).map_err(|e| e.to_string())?;
    check(k == best && k <= Rational::new(3, 2), format!("K = {k}, direct union {best}, bound 3/2"))
}

fn modesty() -> Outcome {
    let z2 = Group::z2();
    let boxes = FolnerSequence::boxes(&z2);
    let mut ratios = Vec::new();
    for n in [64, 100, 128] {
        let bits = description_bits(&z2, &boxes.set(n).unwrap()).unwrap();
        let ratio = bits as f64 / (n * n) as f64;
        if ratio >= 0.05 {
            return Err(format!("side {n}: ratio {ratio}"));
        }
        ratios.push(format!("{ratio:.4}"));
    }
    let mut members = 0;
    for group in [Group::z(), Group::z2(), Group::lattice(3).unwrap(), Group::heisenberg()] {
        for seq in builtin_sequences(&group) {
            let mut i = seq.first_index();
            while seq.size(i).unwrap() <= 1 << 18 {
                if !geometric_modesty_check(&group, &seq.set(i).unwrap()).unwrap() {
                    return Err(format!("{} {} index {i} fails the geometric check", group.id(), seq.name()));
                }
                members += 1;
                i = if i < 32 { i + 1 } else { i + i / 4 };
            }
        }
    }
    Ok(format!("bits/|F| at sides 64,100,128: {}; geometric check on {members} members", ratios.join(", ")))
}

fn quasi_tiling() -> Outcome {
    let mut summary = Vec::new();
    for group in [Group::z(), Group::z2()] {
        let seq = FolnerSequence::boxes(&group);
        for eps in [Rational::new(1, 2), Rational::new(1, 4)] {
            let p = plan(&seq, eps, &PlanOptions::default()).map_err(|e| e.to_string())?;
            for i in [p.threshold + 1, p.threshold + 7, p.threshold + 20] {
                let set = seq.set(i).unwrap();
                let c = cover(&group, &set, &p, &seq).unwrap();
                let report = verify_cover(&group, &set, &p, &c, &seq).unwrap();
                if !report.all_hold() {
                    return Err(format!("{} eps {eps} i {i}: {report:?}", group.id()));
                }
            }
            summary.push(format!("{} eps {eps} N={}", group.id(), p.threshold));
        }
    }
    let z = Group::z();
    let seq = FolnerSequence::boxes(&z);
    let manual = TilingPlan::manual(vec![10], Rational::new(1, 4)).unwrap();
    let hundred = seq.set(100).unwrap();
    let c = cover(&z, &hundred, &manual, &seq).unwrap();
    let report = verify_cover(&z, &hundred, &manual, &c, &seq).unwrap();
    let exact = report.uncovered.lhs == Rational::from_integer(0) && report.all_hold();
    check(exact, format!("{}; [0,100) by [0,10): |T \\ T'| = {}", summary.join(", "), report.uncovered.lhs))
}

fn golden_mean_entropy() -> Outcome {
    // Perron root of [[1,1],[1,0]] by power iteration
    let (mut x, mut y) = (1.0f64, 1.0f64);
    let mut lambda = 0.0;
    for _ in 0..200 {
        let (nx, ny) = (x + y, x);
        lambda = nx / x;
        let norm = nx.hypot(ny);
        (x, y) = (nx / norm, ny / norm);
    }
    let h = lambda.log2();
    let sft = Sft::golden_mean();
    let seq = FolnerSequence::boxes(sft.group());
    let estimate = topological_entropy_estimate(&sft, &seq, 32, 1 << 24).unwrap().last_rate().unwrap();
    let (mut a, mut b) = (1u64, 2u64);
    for n in 1..=20usize {
        let brute = (0u32..1 << n).filter(|w| w & (w >> 1) == 0).count() as u64;
        let tm = count_transfer(&sft, n).unwrap().ok_or("no transfer matrix")?;
        let fib = BigUint::from(b);
        if tm.count != BigUint::from(brute) || tm.count != fib {
            return Err(format!("length {n}: transfer {} brute {brute} fib {b}", tm.count));
        }
        (a, b) = (b, a + b);
    }
    check(
        (estimate - h).abs() < 0.02,
        format!("rate at 32 = {estimate:.5}, log2 of Perron root = {h:.6}; counts at lengths 1..20 agree"),
    )
}

fn counting_bound() -> Outcome {
    let eps = 0.25;
    let h = 0.694242;
    let sft = Sft::golden_mean();
    let seq = FolnerSequence::boxes(sft.group());
    let tiling = TilingPlan::manual(vec![10], Rational::new(1, 4)).unwrap();
    let set = seq.set(100).unwrap();
    let c = cover(sft.group(), &set, &tiling, &seq).unwrap();
    let q = q_count_bound(&sft, &set, &tiling, &c, &seq, 1 << 20).unwrap();
    let limit = ((1.0 + eps) * (h + eps) + eps * 2f64.log2()) * 100.0;
    check(q.log2_bound <= limit, format!("log2 Q = {:.3} <= {limit:.3}", q.log2_bound))
}

struct BrudnoRun {
    label: String,
    entropy: f64,
    freq: Vec<(u64, f64)>,
    lz78: Vec<(u64, f64)>,
    elapsed: Duration,
}

fn brudno_runs() -> Vec<BrudnoRun> {
    let mut runs = Vec::new();
    for (group, upto) in [(Group::z(), 20), (Group::z2(), 10)] {
        let seq = FolnerSequence::dyadic(&group);
        for p in [0.5, 0.1] {
            let start = Instant::now();
            let source = SampledSource { measure: Measure::bernoulli(vec![1.0 - p, p]).unwrap(), seed: 2024 };
            let series = |e| {
                rate_series(&source, &seq, e, 0, upto).unwrap().records.iter().map(|r| (r.size, r.rate)).collect()
            };
            let freq = series(Estimator::Freq);
            let lz78 = series(Estimator::Lz78);
            runs.push(BrudnoRun {
                label: format!("{} p={p}", group.id()),
                entropy: shannon_entropy(&[1.0 - p, p]),
                freq,
                lz78,
                elapsed: start.elapsed(),
            });
        }
    }
    runs
}

fn brudno_upper(runs: &[BrudnoRun]) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for r in runs {
        let (size, f) = *r.freq.last().unwrap();
        let (_, l) = *r.lz78.last().unwrap();
        let pass = (f - r.entropy).abs() <= 0.02 && l <= r.entropy + 0.15 && r.elapsed < Duration::from_secs(120);
        ok &= pass;
        parts.push(format!(
            "{} |F|={size}: freq {f:.4} lz78 {l:.4} H {:.4} ({:.1}s){}",
            r.label,
            r.entropy,
            r.elapsed.as_secs_f64(),
            if pass { "" } else { " FAIL" }
        ));
    }
    check(ok, parts.join("; "))
}

fn brudno_lower(runs: &[BrudnoRun]) -> Outcome {
    let mut worst = f64::INFINITY;
    let mut at = String::new();
    for r in runs {
        for (name, series) in [("freq", &r.freq), ("lz78", &r.lz78)] {
            for &(size, rate) in series.iter() {
                if rate - r.entropy < worst {
                    worst = rate - r.entropy;
                    at = format!("{} {name} |F|={size}", r.label);
                }
            }
        }
    }
    check(worst >= -0.03, format!("smallest rate - H over all indices = {worst:.4} ({at})"))
}

fn markov_source() -> Outcome {
    let z = Group::z();
    let seq = FolnerSequence::dyadic(&z);
    let source = SampledSource { measure: Measure::parse("markov:[[0.5,0.5],[1,0]]").unwrap(), seed: 2024 };
    let lz = rate_series(&source, &seq, Estimator::Lz78, 20, 20).unwrap().last_rate().unwrap();
    let freq = rate_series(&source, &seq, Estimator::Freq, 20, 20).unwrap().last_rate().unwrap();
    let order0 = shannon_entropy(&[2.0 / 3.0, 1.0 / 3.0]);
    let gap = freq - 2.0 / 3.0;
    check(
        (0.64..=0.87).contains(&lz) && (freq - order0).abs() <= 0.02 && gap > 0.2,
        format!("lz78 {lz:.4} in [0.64, 0.87]; freq {freq:.4} vs H(2/3,1/3) {order0:.4}; freq exceeds entropy 2/3 by {gap:.4}"),
    )
}

fn multinomial(counts: &[u64]) -> BigUint {
    let mut m = BigUint::from(1u32);
    let mut placed = 0u64;
    for &c in counts {
        for k in 1..=c {
            placed += 1;
            m = m * BigUint::from(placed) / BigUint::from(k);
        }
    }
    m
}

fn coding_bounds() -> Outcome {
    let mut rng = SplitMix64::new(99);
    let mut slack = f64::INFINITY;
    for _ in 0..1000 {
        let k = 2 + rng.below(7) as usize;
        let n = rng.below(2000) as usize;
        let weights: Vec<f64> = (0..k).map(|_| rng.next_f64().powi(3)).collect();
        let total: f64 = weights.iter().sum();
        let word: Vec<Symbol> = (0..n)
            .map(|_| {
                let mut u = rng.next_f64() * total;
                let mut a = 0;
                while a + 1 < k && u >= weights[a] {
                    u -= weights[a];
                    a += 1;
                }
                a as Symbol
            })
            .collect();
        let counts = letter_counts(&word, k).unwrap();
        let bits = freq_encode(&word, k).unwrap();
        let m = multinomial(&counts);
        let header: u64 = counts.iter().map(|&c| self_delimiting_len(c)).sum();
        let expected = header + (m - 1u32).bits();
        if bits.len() as u64 != expected || freq_code_len(&counts) != expected {
            return Err(format!("freq length {} vs header arithmetic {expected}", bits.len()));
        }
        if bits.len() as f64 > freq_bound(&counts) {
            return Err(format!("freq length {} above bound {}", bits.len(), freq_bound(&counts)));
        }
        slack = slack.min(freq_bound(&counts) - bits.len() as f64);
        if freq_decode(&bits, k).unwrap() != word || lz78_decode(&lz78_encode(&word, k).unwrap(), k).unwrap() != word {
            return Err("coder roundtrip failed".into());
        }
    }
    let mut repair_slack = f64::INFINITY;
    for t in 0..1000 {
        let k = 2 + rng.below(5) as usize;
        let n = 1 + rng.below(3000) as usize;
        let delta = [0.0, 0.01, 0.05, 0.1, rng.next_f64()][t % 5];
        let base: Vec<Symbol> = (0..n).map(|_| rng.below(k as u64) as Symbol).collect();
        let target: Vec<Symbol> = base
            .iter()
            .map(|&a| if rng.next_f64() < delta { ((a as u64 + 1 + rng.below(k as u64 - 1)) % k as u64) as Symbol } else { a })
            .collect();
        let flips = base.iter().zip(&target).filter(|(a, b)| a != b).count() as u64;
        let bits: Bits = repair_encode(&base, &target, k).unwrap();
        let bound = repair_bound(n as u64, flips, k);
        if bits.len() as f64 > bound || repair_decode(&base, &bits, k).unwrap() != target {
            return Err(format!("repair n={n} flips={flips}: {} bits, bound {bound}", bits.len()));
        }
        repair_slack = repair_slack.min(bound - bits.len() as f64);
    }
    Ok(format!(
        "1000 freq words: lengths equal header arithmetic, min slack {slack:.3}; 1000 repairs: min slack {repair_slack:.3}; roundtrips exact"
    ))
}

fn strip_timestamp(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).lines().filter(|l| !l.starts_with("# timestamp:")).collect::<Vec<_>>().join("\n")
}

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_symdyn");
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let golden = data.join("golden_mean.sft");
    let configs: Vec<Vec<String>> = [
        "brudno run --group z2 --family dyadic --estimator all --upto 8 --seed 42",
        "brudno run --group z --family dyadic --measure markov:[[0.5,0.5],[1,0]] --upto 14 --seed 7",
        "repair-demo --n 5000 --seed 11",
        "tile --group z2 --eps 1/4 --i 40",
        "folner defect --group h3 --upto 6",
        "folner tempered --family dyadic --upto 8",
    ]
    .iter()
    .map(|s| s.split_whitespace().map(String::from).collect())
    .chain(std::iter::once(vec![
        "entropy".into(),
        "sft".into(),
        "--file".into(),
        golden.to_string_lossy().into_owned(),
        "--upto".into(),
        "24".into(),
    ]))
    .collect();
    for (k, args) in configs.iter().enumerate() {
        let mut outputs = Vec::new();
        for (run, threads) in ["1", "4"].iter().enumerate() {
            let out = dir.path().join(format!("{k}-{run}.csv"));
            let status = Command::new(bin)
                .args(args)
                .args(["--threads", threads, "--out"])
                .arg(&out)
                .status()
                .map_err(|e| e.to_string())?;
            if !status.success() {
                return Err(format!("`{}` exited with {status}", args.join(" ")));
            }
            outputs.push(strip_timestamp(&std::fs::read(&out).unwrap()));
        }
        if outputs[0] != outputs[1] {
            return Err(format!("`{}` differs between runs", args.join(" ")));
        }
    }
    Ok(format!("{} configurations byte-identical across runs with 1 and 4 threads", configs.len()))
}

fn main() {
    let started = Instant::now();
    let runs = brudno_runs();
    let criteria: Vec<Criterion> = vec![
        ("codec exactness", Box::new(codec_exactness)),
        ("codec hand traces", Box::new(hand_traces)),
        ("Følner defects", Box::new(folner_defects)),
        ("temperedness witness", Box::new(temperedness)),
        ("modesty evidence", Box::new(modesty)),
        ("quasi-tiling assertions", Box::new(quasi_tiling)),
        ("topological entropy", Box::new(golden_mean_entropy)),
        ("counting bound", Box::new(counting_bound)),
        ("complexity rates, upper direction", Box::new(|| brudno_upper(&runs))),
        ("complexity rates, lower direction", Box::new(|| brudno_lower(&runs))),
        ("Markov source", Box::new(markov_source)),
        ("coding bounds", Box::new(coding_bounds)),
        ("CLI determinism", Box::new(cli_determinism)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail}", k + 1);
    }
    println!("acceptance: {} of {} criteria pass ({:.1}s)", criteria.len() - failed, criteria.len(), started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
