use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::report::{content_hash, merge, ExperimentConfig, Report, Table};
use super::{read_file, write_file, CliError, Command, FamilyArgs, FamilyName, GenKind, Mode, SetSource};
use crate::ratio::{format_ratio, parse_ratio, Rational};
use crate::sensitivity::{
    broken_sensitivity_witness, f_recurrence_check, pair_classify, run_coverage, thickness_of_nuv, BrokenQuery,
    SearchBudget,
};
use crate::setcalc::{default_schedule, density_sweep, DensityEstimate, Family, WindowedSet};
use crate::shiftspace::{
    build_a, de_bruijn, eta_two_sided, morse_prefix, morse_two_sided, periodic, tau_power, BuildConfig, Cylinder,
    Distance, GapBase, Sequence, Word,
};
use crate::verdict::Verdict;

const SCHEDULE_NOTE: &str = "fixed window lengths stand in for the Banach-density limit";

pub(super) fn execute(cmd: Command) -> Result<String, CliError> {
    let report = match cmd {
        Command::Gen { kind, out, length, radius, q, k, mode, order, pattern, max_len } => {
            gen(kind, &out, length, radius, q, k, mode, order, pattern, max_len)?
        }
        Command::Famtest { source, family, schedule } => famtest(&source, &family, &schedule)?,
        Command::Bd { source, schedule } => bd(&source, &schedule)?,
        Command::Senswitness {
            host,
            n,
            delta,
            f,
            f_range,
            ls,
            cylinders,
            max_m,
            max_offsets,
            f_family,
            f_family_w,
            f_family_gap,
            f_family_l,
        } => {
            let budget = SearchBudget { max_m, max_offsets };
            let f_family = f_family.map(|name| FamilyArgs {
                family: name,
                gap: f_family_gap,
                l: f_family_l,
                w: f_family_w,
                eps: None,
                min_density: Some("1/2".into()),
                tail_start: None,
            });
            senswitness(&host, n, &delta, f.as_deref(), f_range.as_deref(), &ls, &cylinders, budget, f_family.as_ref())?
        }
        Command::Recur { hosts, cylinders, family, horizon, emit_set } => {
            recur(&hosts, &cylinders, &family, horizon, emit_set.as_deref())?
        }
        Command::Pairs { x, y, eps, w, horizon, tail_start } => pairs(&x, &y, &eps, w, horizon, tail_start)?,
        Command::Nuv { host, w1, w2, l, horizon } => nuv(&host, &w1, &w2, l, horizon)?,
        Command::Coverage { host, n, min_len, gap_base } => coverage(&host, n, min_len, gap_base)?,
        Command::Merge { inputs, out, csv, plot } => return merge_cmd(&inputs, out.as_deref(), csv.as_deref(), plot.as_deref()),
    };
    Ok(report.render())
}

fn ratio_arg(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_ratio(text).map_err(|e| CliError::Input(format!("--{name}: {e}")))
}

fn need<T>(name: &str, v: Option<T>) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("missing required --{name}")))
}

fn load_sequence(path: &Path) -> Result<(Sequence, String), CliError> {
    let text = read_file(path)?;
    let seq = text.parse::<Sequence>()?;
    Ok((seq, content_hash(text.as_bytes())))
}

fn load_word(path: &Path) -> Result<(Word, String), CliError> {
    let (seq, hash) = load_sequence(path)?;
    match seq {
        Sequence::OneSided(w) => Ok((w, hash)),
        Sequence::TwoSided(_) => Err(CliError::Input(format!("{} is two-sided; a one-sided host is required", path.display()))),
    }
}

fn load_set(path: &Path) -> Result<(WindowedSet, String), CliError> {
    let text = read_file(path)?;
    Ok((text.parse::<WindowedSet>()?, content_hash(text.as_bytes())))
}

fn put_verdict(r: &mut Report, prefix: &str, v: &Verdict) {
    r.set(&format!("{prefix}verdict"), v.kind);
    r.set(&format!("{prefix}evidence"), v.evidence.as_ref().map_or("-".to_string(), |e| e.to_string()));
    r.set(&format!("{prefix}horizon"), v.horizon);
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn decimal(r: &Rational) -> String {
    format!("{:.6}", *r.numer() as f64 / *r.denom() as f64)
}

#[allow(clippy::too_many_arguments)]
fn gen(
    kind: GenKind,
    out: &Path,
    length: Option<usize>,
    radius: Option<usize>,
    q: usize,
    k: Option<usize>,
    mode: Mode,
    order: Option<usize>,
    pattern: Option<String>,
    max_len: usize,
) -> Result<Report, CliError> {
    let mut cfg = ExperimentConfig::new("gen");
    let mut audit = Vec::new();
    let seq = match kind {
        GenKind::Morse | GenKind::Eta => {
            let name = if kind == GenKind::Morse { "morse" } else { "eta" };
            cfg.set("kind", name);
            match (length, radius) {
                (_, Some(r)) => {
                    cfg.set("radius", r);
                    let w = if kind == GenKind::Morse { morse_two_sided(r)? } else { eta_two_sided(r)? };
                    Sequence::TwoSided(w)
                }
                (Some(l), None) if kind == GenKind::Morse => {
                    cfg.set("length", l);
                    if l == 0 {
                        return Err(CliError::Input("--length must be at least 1".into()));
                    }
                    Sequence::OneSided(morse_prefix(l))
                }
                _ => return Err(CliError::Input(format!("{name} needs --radius{}", if kind == GenKind::Morse { " or --length" } else { "" }))),
            }
        }
        GenKind::Nmorse => {
            let k = need("k", k)?;
            cfg.set("kind", "nmorse").set("q", q).set("k", k);
            Sequence::OneSided(tau_power(q, k)?)
        }
        GenKind::Combination => {
            let k = need("k", k)?;
            let gap_base = match mode {
                Mode::Paper => GapBase::Paper,
                Mode::Scaled => GapBase::Scaled,
            };
            cfg.set("kind", "combination").set("k", k).set("mode", gap_base.as_str()).set("max_len", max_len);
            let (w, levels) = build_a(k, &BuildConfig { gap_base, max_len })?;
            audit = levels;
            Sequence::OneSided(w)
        }
        GenKind::Debruijn => {
            let order = need("order", order)?;
            cfg.set("kind", "debruijn").set("q", q).set("order", order);
            Sequence::OneSided(de_bruijn(q, order)?)
        }
        GenKind::Periodic => {
            let pattern = need("pattern", pattern)?;
            let length = need("length", length)?;
            cfg.set("kind", "periodic").set("q", q).set("pattern", &pattern).set("length", length);
            Sequence::OneSided(periodic(&Word::from_digits(&pattern, q)?, length)?)
        }
    };
    let text = seq.to_text();
    write_file(out, text.as_bytes())?;
    let mut r = Report::new(cfg);
    r.set("length", seq.word().len());
    if let Sequence::TwoSided(w) = &seq {
        r.set("origin", w.origin());
    }
    r.set("sha256", content_hash(text.as_bytes()));
    let head = seq.word().len().min(64);
    r.set("prefix", seq.word().factor(0, head));
    if !audit.is_empty() {
        let mut t = Table::new("levels", &["level", "length", "gap_base", "subblocks", "combination_blocks"]);
        for a in &audit {
            t.push(vec![
                a.level.to_string(),
                a.len.to_string(),
                a.gap_base.to_string(),
                a.subblocks.to_string(),
                a.combination_blocks.to_string(),
            ]);
        }
        r.set("levels", audit.len());
        r.tables.push(t);
    }
    Ok(r)
}

fn resolve_set(source: &SetSource, cfg: &mut ExperimentConfig) -> Result<WindowedSet, CliError> {
    match (&source.set, source.random) {
        (Some(path), _) => {
            let (set, hash) = load_set(path)?;
            cfg.set("set.sha256", hash);
            Ok(set)
        }
        (None, Some(h)) => {
            let fill = ratio_arg("fill", &source.fill)?;
            if fill > Rational::from_integer(1) {
                return Err(CliError::Input("--fill must be at most 1".into()));
            }
            cfg.set("set.random.horizon", h).set("set.random.fill", format_ratio(&fill)).set("set.random.seed", source.seed);
            cfg.set("set.random.rng", "chacha8");
            let mut rng = ChaCha8Rng::seed_from_u64(source.seed);
            Ok(WindowedSet::random(h, fill, &mut rng)?)
        }
        (None, None) => Err(CliError::Input("give --set FILE or --random H".into())),
    }
}

fn family_from(args: &FamilyArgs, cfg: &mut ExperimentConfig, prefix: &str) -> Result<Family, CliError> {
    let key = |k: &str| format!("{prefix}{k}");
    let fam = match args.family {
        FamilyName::Inf => Family::Infinite { tail_start: need("tail-start", args.tail_start)? },
        FamilyName::T => Family::Thick { l: need("l", args.l)? },
        FamilyName::S => Family::Syndetic { n: need("gap", args.gap)? },
        FamilyName::Ps => Family::PiecewiseSyndetic { n: need("gap", args.gap)?, l: need("l", args.l)? },
        FamilyName::Pubd => Family::PositiveUpperDensity {
            w: need("w", args.w)?,
            min_density: ratio_arg("min-density", &need("min-density", args.min_density.clone())?)?,
        },
        FamilyName::Lbd1 => Family::LowerDensityOne {
            w: need("w", args.w)?,
            eps: ratio_arg("eps", &need("eps", args.eps.clone())?)?,
        },
    };
    cfg.set(&key("family"), fam.short_name());
    match &fam {
        Family::Infinite { tail_start } => {
            cfg.set(&key("tail_start"), tail_start);
        }
        Family::Thick { l } => {
            cfg.set(&key("l"), l);
        }
        Family::Syndetic { n } => {
            cfg.set(&key("gap"), n);
        }
        Family::PiecewiseSyndetic { n, l } => {
            cfg.set(&key("gap"), n).set(&key("l"), l);
        }
        Family::PositiveUpperDensity { w, min_density } => {
            cfg.set(&key("w"), w).set(&key("min_density"), format_ratio(min_density));
        }
        Family::LowerDensityOne { w, eps } => {
            cfg.set(&key("w"), w).set(&key("eps"), format_ratio(eps));
        }
    }
    Ok(fam)
}

fn density_table(set: &WindowedSet, schedule: &[usize], cfg: &mut ExperimentConfig) -> Result<Table, CliError> {
    let schedule: Vec<usize> = if schedule.is_empty() { default_schedule(set.horizon()) } else { schedule.to_vec() };
    cfg.set("schedule", join(&schedule)).set("schedule_note", SCHEDULE_NOTE);
    let rows = density_sweep(set, &schedule)?;
    let mut t = Table::new("density", &["w", "upper", "upper_at", "upper_f", "lower", "lower_at", "lower_f"]);
    for (up, lo) in rows {
        let cell = |d: &DensityEstimate| [format_ratio(&d.value), d.argwindow.to_string(), decimal(&d.value)];
        let mut row = vec![up.window_length.to_string()];
        row.extend(cell(&up));
        row.extend(cell(&lo));
        t.push(row);
    }
    Ok(t)
}

fn famtest(source: &SetSource, family: &FamilyArgs, schedule: &[usize]) -> Result<Report, CliError> {
    let mut cfg = ExperimentConfig::new("famtest");
    let set = resolve_set(source, &mut cfg)?;
    let fam = family_from(family, &mut cfg, "")?;
    let table = density_table(&set, schedule, &mut cfg)?;
    let verdict = fam.witness(&set)?;
    let mut r = Report::new(cfg);
    r.set("set.horizon", set.horizon()).set("set.size", set.len());
    put_verdict(&mut r, "", &verdict);
    r.tables.push(table);
    Ok(r)
}

fn bd(source: &SetSource, schedule: &[usize]) -> Result<Report, CliError> {
    let mut cfg = ExperimentConfig::new("bd");
    let set = resolve_set(source, &mut cfg)?;
    let table = density_table(&set, schedule, &mut cfg)?;
    let mut r = Report::new(cfg);
    r.set("set.horizon", set.horizon()).set("set.size", set.len());
    r.tables.push(table);
    Ok(r)
}

fn parse_range(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Input(format!("--f-range expects `a..b`, got `{text}`"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let (a, b) = (a.parse::<usize>().map_err(|_| bad())?, b.parse::<usize>().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

#[allow(clippy::too_many_arguments)]
fn senswitness(
    host_path: &Path,
    n: usize,
    delta: &str,
    f_path: Option<&Path>,
    f_range: Option<&str>,
    ls: &[usize],
    cylinders: &[String],
    budget: SearchBudget,
    f_family: Option<&FamilyArgs>,
) -> Result<Report, CliError> {
    let mut cfg = ExperimentConfig::new("senswitness");
    let (host, hash) = load_word(host_path)?;
    cfg.set("host.sha256", hash).set("n", n);
    let delta = ratio_arg("delta", delta)?;
    cfg.set("delta", format_ratio(&delta));
    let max_l = ls.iter().copied().max().unwrap_or(0);
    let f = match (f_path, f_range) {
        (Some(p), _) => {
            let (set, hash) = load_set(p)?;
            cfg.set("f.sha256", hash);
            set
        }
        (None, Some(range)) => {
            let (a, b) = parse_range(range)?;
            cfg.set("f.range", format!("{a}..{b}"));
            WindowedSet::from_predicate(b.max(max_l) + 1, |t| (a..=b).contains(&t))?
        }
        (None, None) => return Err(CliError::Input("give --f FILE or --f-range a..b".into())),
    };
    cfg.set("l", join(ls)).set("cylinders", cylinders.join(" ")).set("budget", budget);
    let fam = f_family.map(|a| family_from(a, &mut cfg, "f_family.")).transpose()?;

    let cyls = cylinders
        .iter()
        .map(|c| Cylinder::parse(c, host.alphabet() as usize))
        .collect::<Result<Vec<_>, _>>()?;
    let mut r = Report::new(cfg);
    if let Some(fam) = &fam {
        // F's own membership is a separate finite verdict stacked under each witness
        put_verdict(&mut r, "f_family.", &fam.witness(&f)?);
    }
    let (mut witnessed, mut unknown) = (0, 0);
    let mut idx = 0;
    for u in &cyls {
        for &l in ls {
            let q = BrokenQuery { host: &host, n, delta, f: &f, l, u };
            let rep = broken_sensitivity_witness(&q, &budget)?;
            if rep.verdict.is_witnessed() {
                witnessed += 1;
            } else {
                unknown += 1;
            }
            let p = format!("witness.{idx}.");
            r.set(&format!("{p}cylinder"), u).set(&format!("{p}l"), l);
            for line in rep.to_record().lines() {
                let (k, v) = line.split_once('=').expect("record lines are key=value");
                r.set(&format!("{p}{k}"), v);
            }
            idx += 1;
        }
    }
    r.set("summary.witnessed", witnessed).set("summary.unknown", unknown);
    Ok(r)
}

fn recur(
    host_paths: &[std::path::PathBuf],
    cylinders: &[String],
    family: &FamilyArgs,
    horizon: usize,
    emit: Option<&Path>,
) -> Result<Report, CliError> {
    let mut cfg = ExperimentConfig::new("recur");
    let mut hosts = Vec::new();
    for (i, p) in host_paths.iter().enumerate() {
        let (w, hash) = load_word(p)?;
        cfg.set(&format!("host.{i}.sha256"), hash);
        hosts.push(w);
    }
    cfg.set("cylinders", cylinders.join(" ")).set("horizon", horizon);
    let fam = family_from(family, &mut cfg, "")?;
    let cyls = cylinders
        .iter()
        .zip(&hosts)
        .map(|(c, h)| Cylinder::parse(c, h.alphabet() as usize))
        .collect::<Result<Vec<_>, _>>()?;
    let (visits, verdict) = f_recurrence_check(&hosts, &cyls, &fam, horizon)?;
    if let Some(path) = emit {
        write_file(path, visits.to_text().as_bytes())?;
    }
    let mut r = Report::new(cfg);
    r.set("visits.horizon", visits.horizon()).set("visits.size", visits.len());
    r.set("visits.head", join(visits.elements().iter().take(32)));
    put_verdict(&mut r, "", &verdict);
    Ok(r)
}

fn distance_cells(d: &Distance) -> [String; 2] {
    let exponent = match d {
        Distance::Zero => "inf".to_string(),
        Distance::Pow2(n) => n.to_string(),
    };
    [d.to_string(), exponent]
}

fn pairs(x: &Path, y: &Path, eps: &str, w: usize, horizon: usize, tail_start: Option<usize>) -> Result<Report, CliError> {
    let mut cfg = ExperimentConfig::new("pairs");
    let (xs, xh) = load_sequence(x)?;
    let (ys, yh) = load_sequence(y)?;
    let eps = ratio_arg("eps", eps)?;
    let tail = tail_start.unwrap_or(horizon / 2);
    cfg.set("x.sha256", xh).set("y.sha256", yh).set("eps", format_ratio(&eps));
    cfg.set("w", w).set("horizon", horizon).set("tail_start", tail);
    let pc = match (&xs, &ys) {
        (Sequence::OneSided(a), Sequence::OneSided(b)) => pair_classify(a, b, &eps, w, horizon, tail)?,
        (Sequence::TwoSided(a), Sequence::TwoSided(b)) => pair_classify(a, b, &eps, w, horizon, tail)?,
        _ => return Err(CliError::Input("x and y must both be one-sided or both two-sided".into())),
    };
    let mut r = Report::new(cfg);
    r.set("min_distance", pc.min_distance).set("argmin", pc.argmin);
    r.set("tail_max_distance", pc.tail_max_distance).set("tail_argmax", pc.tail_argmax);
    r.set("proximal_evidence", pc.proximal_evidence());
    r.set("asymptotic_evidence", pc.asymptotic_evidence());
    r.set("bad_set.size", pc.bad_set.len());
    r.set("bad_set_ubd", pc.bad_set_ubd);
    r.set("range_limited", pc.range_limited);
    let mut t = Table::new("separation", &["k", "distance", "exponent"]);
    for (k, d) in pc.distances.iter().enumerate() {
        let [a, b] = distance_cells(d);
        t.push(vec![k.to_string(), a, b]);
    }
    r.tables.push(t);
    Ok(r)
}

fn nuv(host_path: &Path, w1: &str, w2: &str, l: usize, horizon: usize) -> Result<Report, CliError> {
    let mut cfg = ExperimentConfig::new("nuv");
    let (host, hash) = load_word(host_path)?;
    cfg.set("host.sha256", hash).set("w1", w1).set("w2", w2).set("l", l).set("horizon", horizon);
    let q = host.alphabet() as usize;
    let (w1, w2) = (Word::from_digits(w1, q)?, Word::from_digits(w2, q)?);
    let (set, verdict) = thickness_of_nuv(&host, &w1, &w2, l, horizon)?;
    let mut r = Report::new(cfg);
    r.set("hits.horizon", set.horizon()).set("hits.size", set.len());
    let longest = set.runs().into_iter().max_by_key(|&(s, len)| (len, std::cmp::Reverse(s)));
    r.set("longest_run", longest.map_or("-".to_string(), |(s, len)| format!("{s}+{len}")));
    put_verdict(&mut r, "", &verdict);
    Ok(r)
}

fn coverage(host_path: &Path, n: usize, min_len: usize, gap_base: Option<u64>) -> Result<Report, CliError> {
    let mut cfg = ExperimentConfig::new("coverage");
    let (host, hash) = load_word(host_path)?;
    cfg.set("host.sha256", hash).set("n", n).set("min_len", min_len);
    if let Some(b) = gap_base {
        cfg.set("gap_base", b);
    }
    let rc = run_coverage(&host, n, min_len)?;
    let mut r = Report::new(cfg);
    r.set("value", format_ratio(&rc.value)).set("value_f", decimal(&rc.value));
    r.set("argwindow", format!("{}+{}", rc.start, rc.len));
    if let Some(b) = gap_base {
        if b < 4 {
            return Err(CliError::Input("--gap-base must be at least 4".into()));
        }
        let bound = Rational::from_integer(1) - Rational::new(3, b - 1);
        r.set("bound", format_ratio(&bound)).set("meets_bound", rc.value >= bound);
    }
    Ok(r)
}

fn merge_cmd(inputs: &[std::path::PathBuf], out: Option<&Path>, csv: Option<&Path>, plot: Option<&Path>) -> Result<String, CliError> {
    let reports = inputs.iter().map(|p| Report::parse(&read_file(p)?)).collect::<Result<Vec<_>, _>>()?;
    let merged = merge(reports)?;
    let bundle = merged.bundle();
    if let Some(p) = csv {
        write_file(p, merged.csv()?.as_bytes())?;
    }
    if let Some(p) = plot {
        write_file(p, merged.plot_data().as_bytes())?;
    }
    match out {
        Some(p) => {
            write_file(p, bundle.as_bytes())?;
            Ok(format!("merged {} reports\n", merged.reports.len()))
        }
        None => Ok(bundle),
    }
}
