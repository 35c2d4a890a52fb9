use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use symdyn::complexity::bits::{bits_from_str, bits_to_string};
use symdyn::complexity::{rate_series, repair_bound, repair_decode, repair_encode, Estimator};
use symdyn::folner::{defect_report, description_bits, modest_search, temperedness_constant, FolnerSequence};
use symdyn::quasitiling::{cover, plan, verify_cover, PlanOptions, TilingPlan};
use symdyn::setcodec;
use symdyn::stochastic::{Measure, SampledSource, SplitMix64};
use symdyn::symbolic::{admissible_patterns, Sft};
use symdyn::{FiniteSubset, Group, Rational, Symbol};

use crate::report::Report;
use crate::{BrudnoCommand, Cli, CodecCommand, Command, EntropyCommand, FamilyArgs, FolnerCommand, RepairArgs, TileArgs};

/// A flag value that names nothing; reported like a clap usage error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// 2 for bad flag values, 3 for exhausted budgets, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<symdyn::Error>() {
        Some(symdyn::Error::Budget(_) | symdyn::Error::CapExceeded(_)) => 3,
        Some(symdyn::Error::Parse(_)) => 2,
        _ => 1,
    }
}

struct Run<'a> {
    cli: &'a Cli,
    path: &'a str,
    echo: &'a [(String, String)],
}

impl Run<'_> {
    fn report(&self) -> Result<Report> {
        Report::create(self.cli.out.as_deref(), self.path, self.cli.seed, self.echo)
    }

    fn seed(&self) -> Result<u64> {
        self.cli.seed.ok_or_else(|| usage(format!("`{}` samples random data and needs --seed", self.path)))
    }
}

pub fn run(cli: &Cli, path: &str, echo: &[(String, String)]) -> Result<()> {
    let ctx = Run { cli, path, echo };
    match &cli.command {
        Command::Folner(FolnerCommand::Defect { family, from, upto }) => folner_defect(&ctx, family, *from, *upto),
        Command::Folner(FolnerCommand::Tempered { family, upto }) => folner_tempered(&ctx, family, *upto),
        Command::Folner(FolnerCommand::ModestSearch { group, i, cap }) => folner_modest(&ctx, group, *i, *cap),
        Command::Codec(CodecCommand::Encode { group, set_file }) => codec_encode(&ctx, group, set_file),
        Command::Codec(CodecCommand::Decode { group, code_file }) => codec_decode(&ctx, group, code_file),
        Command::Tile(args) => tile(&ctx, args),
        Command::Entropy(EntropyCommand::Sft { file, family, from, upto, budget }) => {
            entropy_sft(&ctx, file, family, *from, *upto, *budget)
        }
        Command::Entropy(EntropyCommand::Measure { measure }) => entropy_measure(&ctx, measure),
        Command::Brudno(BrudnoCommand::Run { family, measure, estimator, from, upto }) => {
            brudno_run(&ctx, family, measure, estimator, *from, *upto)
        }
        Command::RepairDemo(args) => repair_demo(&ctx, args),
    }
}

fn group(id: &str) -> Result<Group> {
    Group::from_id(id).map_err(|e| usage(e.to_string()))
}

fn sequence(group: &Group, family: &str) -> Result<FolnerSequence> {
    FolnerSequence::from_id(group, family).map_err(|e| usage(e.to_string()))
}

fn family(args: &FamilyArgs) -> Result<FolnerSequence> {
    sequence(&group(&args.group)?, &args.family)
}

fn index_range(seq: &FolnerSequence, from: Option<usize>, upto: usize) -> Result<std::ops::RangeInclusive<usize>> {
    let from = from.unwrap_or(seq.first_index());
    if from < seq.first_index() || from > upto {
        return Err(usage(format!("need {} ≤ from ≤ upto, got from={from} upto={upto}", seq.first_index())));
    }
    Ok(from..=upto)
}

fn elements_text(group: &Group, set: &FiniteSubset) -> Result<String> {
    let names = set.iter().map(|g| group.format_element(g)).collect::<symdyn::Result<Vec<_>>>()?;
    Ok(names.join(" "))
}

fn folner_defect(ctx: &Run, args: &FamilyArgs, from: Option<usize>, upto: usize) -> Result<()> {
    let seq = family(args)?;
    let rows = index_range(&seq, from, upto)?
        .into_par_iter()
        .map(|i| {
            let report = defect_report(&seq, i)?;
            let bits = description_bits(seq.group(), &seq.set(i)?)?;
            Ok((i, report, bits))
        })
        .collect::<symdyn::Result<Vec<_>>>()?;
    let mut out = ctx.report()?;
    out.row(["i", "size", "max_defect_num", "max_defect_den", "description_bits"])?;
    for (i, report, bits) in rows {
        out.row([
            i.to_string(),
            report.size.to_string(),
            report.max.numer().to_string(),
            report.max.denom().to_string(),
            bits.to_string(),
        ])?;
    }
    out.finish()
}

fn folner_tempered(ctx: &Run, args: &FamilyArgs, upto: usize) -> Result<()> {
    let seq = family(args)?;
    let first = 2.max(seq.first_index() + 1);
    if upto < first {
        return Err(usage(format!("--upto must be at least {first}")));
    }
    let rows = (first..=upto)
        .into_par_iter()
        .map(|i| Ok((i, temperedness_constant(&seq, i)?)))
        .collect::<symdyn::Result<Vec<_>>>()?;
    let mut out = ctx.report()?;
    out.comment("witness K holds on the prefix up to i only")?;
    out.row(["i", "witness_num", "witness_den", "witness"])?;
    for (i, k) in rows {
        out.row([i.to_string(), k.numer().to_string(), k.denom().to_string(), (*k.numer() as f64 / *k.denom() as f64).to_string()])?;
    }
    out.finish()
}

fn folner_modest(ctx: &Run, group_id: &str, i: usize, cap: u64) -> Result<()> {
    let g = group(group_id)?;
    let mut out = ctx.report()?;
    out.row(["i", "size", "elements"])?;
    match modest_search(&g, i, cap) {
        Ok(set) => {
            out.row([i.to_string(), set.len().to_string(), elements_text(&g, &set)?])?;
            out.finish()
        }
        Err(e) => {
            out.comment(&format!("partial: {e}"))?;
            out.finish()?;
            Err(e.into())
        }
    }
}

fn read_set_file(group: &Group, path: &Path) -> Result<FiniteSubset> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut elems = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == "element" {
            continue;
        }
        let g = group
            .parse_element(line.trim_matches('"'))
            .map_err(|e| anyhow!("{}:{}: {e}", path.display(), lineno + 1))?;
        elems.push(g);
    }
    Ok(FiniteSubset::from_elements(elems))
}

fn read_code_file(path: &Path) -> Result<String> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut code = None;
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') || line.starts_with("size") {
            continue;
        }
        // a data row `size,length,bits` or a bare bit string
        let field = line.rsplit(',').next().unwrap_or(line).trim();
        if code.replace(field.to_string()).is_some() {
            bail!("{} holds more than one code", path.display());
        }
    }
    code.ok_or_else(|| anyhow!("{} holds no code", path.display()))
}

fn codec_encode(ctx: &Run, group_id: &str, set_file: &Path) -> Result<()> {
    let g = group(group_id)?;
    let set = read_set_file(&g, set_file)?;
    let bits = setcodec::encode_connected(&g, &set)?;
    let mut out = ctx.report()?;
    out.row(["size", "length", "bits"])?;
    out.row([set.len().to_string(), bits.len().to_string(), bits_to_string(&bits)])?;
    out.finish()
}

fn codec_decode(ctx: &Run, group_id: &str, code_file: &Path) -> Result<()> {
    let g = group(group_id)?;
    let bits = bits_from_str(&read_code_file(code_file)?)?;
    let set = setcodec::decode(&g, &bits)?;
    let mut out = ctx.report()?;
    out.row(["element"])?;
    for e in set.iter() {
        out.row([g.format_element(e)?])?;
    }
    out.finish()
}

fn parse_eps(text: &str) -> Result<Rational> {
    text.trim().parse::<Rational>().map_err(|_| usage(format!("eps `{text}` is not a fraction like 1/4")))
}

fn tile(ctx: &Run, args: &TileArgs) -> Result<()> {
    let seq = family(&args.family)?;
    let g = seq.group().clone();
    let eps = parse_eps(&args.eps)?;
    let tiling = match &args.scales {
        Some(list) => {
            let scales = list
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| usage(format!("bad scale `{s}`"))))
                .collect::<Result<Vec<_>>>()?;
            TilingPlan::manual(scales, eps)?
        }
        None => {
            let options = PlanOptions { max_tile_size: args.max_tile_size, ..PlanOptions::default() };
            plan(&seq, eps, &options)?
        }
    };
    let set = seq.set(args.i)?;
    let c = cover(&g, &set, &tiling, &seq)?;
    let report = verify_cover(&g, &set, &tiling, &c, &seq)?;

    let mut out = ctx.report()?;
    let scales: Vec<String> = tiling.scales.iter().map(|s| s.to_string()).collect();
    out.comment(&format!("plan scales: {}", scales.join(" ")))?;
    if args.scales.is_none() {
        out.comment(&format!("plan threshold N: {}", tiling.threshold))?;
        if args.i <= tiling.threshold {
            out.comment("i does not exceed N; the assertions are checked, not promised")?;
        }
    }
    out.row(["kind", "scale", "element", "lhs", "rhs", "holds"])?;
    for (&j, centers) in tiling.scales.iter().zip(&c.centers) {
        for e in centers.iter() {
            out.row(["center".to_string(), j.to_string(), g.format_element(e)?, String::new(), String::new(), String::new()])?;
        }
    }
    let names = ["inside", "uncovered", "overlap_covered", "overlap_total"];
    for (name, a) in names.iter().zip(report.assertions()) {
        out.row([
            format!("assertion_{name}"),
            String::new(),
            String::new(),
            a.lhs.to_string(),
            a.rhs.to_string(),
            a.holds().to_string(),
        ])?;
    }
    out.finish()?;
    let tiles: usize = c.centers.iter().map(|r| r.len()).sum();
    eprintln!(
        "covered {} of {} elements with {tiles} tiles; assertions {}",
        report.covered_size,
        report.set_size,
        if report.all_hold() { "all hold" } else { "FAIL" }
    );
    Ok(())
}

fn entropy_sft(ctx: &Run, file: &Path, family: &str, from: Option<usize>, upto: usize, budget: u64) -> Result<()> {
    let text = fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let sft = Sft::parse(&text)?;
    let seq = sequence(sft.group(), family)?;
    let mut out = ctx.report()?;
    out.comment("counts are locally admissible patterns: upper bounds on |pr_F(X)| unless exact is true")?;
    out.row(["i", "size", "method", "exact", "count", "log2_count", "rate"])?;
    for i in index_range(&seq, from, upto)? {
        let set = seq.set(i)?;
        match admissible_patterns(&sft, &set, budget) {
            Ok(c) => {
                let log2 = c.log2();
                out.row([
                    i.to_string(),
                    set.len().to_string(),
                    format!("{:?}", c.method).to_lowercase(),
                    c.exact.to_string(),
                    c.count.to_string(),
                    log2.to_string(),
                    (log2 / set.len() as f64).to_string(),
                ])?;
            }
            Err(e) => {
                out.comment(&format!("partial: stopped at i={i}: {e}"))?;
                out.finish()?;
                return Err(e.into());
            }
        }
    }
    out.finish()
}

fn entropy_measure(ctx: &Run, text: &str) -> Result<()> {
    let m = Measure::parse(text).map_err(|e| usage(e.to_string()))?;
    let mut out = ctx.report()?;
    out.row(["measure", "ks_entropy"])?;
    out.row([m.describe(), m.ks_entropy().to_string()])?;
    out.finish()
}

fn brudno_run(
    ctx: &Run,
    args: &FamilyArgs,
    measure: &str,
    estimator: &str,
    from: Option<usize>,
    upto: usize,
) -> Result<()> {
    let seq = family(args)?;
    let measure = Measure::parse(measure).map_err(|e| usage(e.to_string()))?;
    let estimators = Estimator::parse_list(estimator).map_err(|e| usage(e.to_string()))?;
    let range = index_range(&seq, from, upto)?;
    let source = SampledSource { measure, seed: ctx.seed()? };
    let h = source.measure.ks_entropy();
    let mut series = Vec::new();
    for est in estimators {
        series.push(rate_series(&source, &seq, est, *range.start(), *range.end())?);
    }
    let mut out = ctx.report()?;
    out.comment("complexity columns are upper bounds: lengths of decodable codes, not Kolmogorov complexity")?;
    out.row(["estimator", "i", "size", "bits", "rate", "ks_entropy"])?;
    for s in &series {
        for r in &s.records {
            out.row([s.estimator.clone(), r.index.to_string(), r.size.to_string(), r.bits.to_string(), r.rate.to_string(), h.to_string()])?;
        }
    }
    out.finish()
}

fn repair_demo(ctx: &Run, args: &RepairArgs) -> Result<()> {
    if args.alphabet < 2 || args.alphabet > 256 {
        return Err(usage("--alphabet must lie in 2..=256"));
    }
    if args.n == 0 {
        return Err(usage("--n must be positive"));
    }
    let deltas = args
        .deltas
        .split(',')
        .map(|s| match s.trim().parse::<f64>() {
            Ok(d) if (0.0..=1.0).contains(&d) => Ok(d),
            _ => Err(usage(format!("bad corruption rate `{s}`"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rng = SplitMix64::new(ctx.seed()?);
    let k = args.alphabet as u64;
    let base: Vec<Symbol> = (0..args.n).map(|_| rng.below(k) as Symbol).collect();
    let mut out = ctx.report()?;
    out.comment("bits are upper bounds on the complexity of the target given the base")?;
    out.row(["delta", "n", "flips", "bits", "bound", "roundtrip"])?;
    for delta in deltas {
        let mut rng = rng.split();
        let target: Vec<Symbol> = base
            .iter()
            .map(|&a| if rng.next_f64() < delta { ((a as u64 + 1 + rng.below(k - 1)) % k) as Symbol } else { a })
            .collect();
        let flips = base.iter().zip(&target).filter(|(a, b)| a != b).count() as u64;
        let bits = repair_encode(&base, &target, args.alphabet)?;
        let back = repair_decode(&base, &bits, args.alphabet)?;
        out.row([
            delta.to_string(),
            args.n.to_string(),
            flips.to_string(),
            bits.len().to_string(),
            repair_bound(args.n as u64, flips, args.alphabet).to_string(),
            (back == target).to_string(),
        ])?;
    }
    out.finish()
}
