//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symdyn::cli::main_with_args;
use symdyn::sensitivity::{
    blockily_thick_witness, broken_sensitivity_witness, closeness_depth, limsup_separation, pair_classify,
    run_coverage, sensitive_tuple_check, separation_depth, thickness_of_nuv, unique_pubd_recurrent_check,
    verify_witness, BrokenQuery, SearchBudget, TupleSpec,
};
use symdyn::setcalc::{
    lower_banach_density, syndetic_witness, thick_witness, upper_banach_density, WindowedSet,
};
use symdyn::shiftspace::{
    build_a, de_bruijn, eta_two_sided, morse_prefix, morse_two_sided, occurrences, subblocks, tau_power,
    BuildConfig, Cylinder, Distance, GapBase, Word,
};
use symdyn::{Evidence, Rational, VerdictKind};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn bits(d: &str) -> Word {
    Word::from_digits(d, 2).unwrap()
}

fn cyl(d: &str) -> Cylinder {
    Cylinder::at_origin(bits(d)).unwrap()
}

// 1 -------------------------------------------------------------------------

fn morse_golden() -> Outcome {
    if morse_prefix(16).to_digits() != "0110100110010110" {
        return fail("morse_prefix(16) differs from 0110100110010110");
    }
    let m = morse_prefix(1 << 14);
    let s = m.symbols();
    for n in 0..(1usize << 13) {
        if s[2 * n] != s[n] || s[2 * n + 1] != 1 - s[n] {
            return fail(format!("recursion identity broken at n={n}"));
        }
    }
    for k in 0..=13 {
        if morse_prefix(1 << k) != tau_power(2, k).unwrap() {
            return fail(format!("morse_prefix(2^{k}) != tau_power(2,{k})"));
        }
    }
    pass("prefix, 2^13 recursion identities, substitution fixed point k<=13")
}

// 2 -------------------------------------------------------------------------

fn naive_density(set: &WindowedSet, w: usize, upper: bool) -> Rational {
    let mut best: Option<usize> = None;
    for m in 0..=set.horizon() - w {
        let c = (m..m + w).filter(|&t| set.contains(t)).count();
        best = Some(match best {
            None => c,
            Some(b) if upper => b.max(c),
            Some(b) => b.min(c),
        });
    }
    Rational::new(best.unwrap() as u64, w as u64)
}

fn density_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checks = 0;
    for i in 0..500 {
        let fill = Rational::new(rng.gen_range(0..=8), 8);
        let set = WindowedSet::random(256, fill, &mut rng).unwrap();
        for w in [8, 16, 32, 64] {
            let up = upper_banach_density(&set, w).unwrap();
            let lo = lower_banach_density(&set, w).unwrap();
            if up.value != naive_density(&set, w, true) || lo.value != naive_density(&set, w, false) {
                return fail(format!("set {i}, w={w}: detector differs from all-window oracle"));
            }
            for d in [up, lo] {
                if Rational::new(set.count_in(d.argwindow, w) as u64, w as u64) != d.value {
                    return fail(format!("set {i}, w={w}: argwindow recount differs"));
                }
            }
            checks += 2;
        }
    }
    pass(format!("{checks} exact rational comparisons"))
}

// 3 -------------------------------------------------------------------------

fn syndetic_set(rng: &mut ChaCha8Rng, n: usize, h: usize) -> WindowedSet {
    let mut elems = Vec::new();
    let mut t = rng.gen_range(0..=n);
    while t < h {
        elems.push(t);
        t += 1 + rng.gen_range(0..=n);
    }
    let mut all: Vec<usize> = (0..h).filter(|x| elems.contains(x) || rng.gen_bool(0.2)).collect();
    if rng.gen_bool(0.5) {
        let len = rng.gen_range(20..120);
        let start = rng.gen_range(0..h - len);
        all.extend(start..start + len);
    }
    WindowedSet::from_unsorted(all, h).unwrap()
}

fn family_hierarchy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut syndetic, mut thick) = (0, 0);
    for i in 0..200 {
        let n = rng.gen_range(1..=8);
        let set = syndetic_set(&mut rng, n, 1024);
        let v = syndetic_witness(&set, n).unwrap();
        if v.kind != VerdictKind::Witnessed {
            return fail(format!("sample {i}: generator did not produce a syndetic set"));
        }
        syndetic += 1;
        let w = 16 * (n + 1);
        let lo = lower_banach_density(&set, w).unwrap();
        if lo.value < Rational::new(1, (n + 1) as u64) {
            return fail(format!("sample {i}: lower density {} < 1/{}", lo.value, n + 1));
        }
        for l in [5, 10, 20, 50, 100] {
            if thick_witness(&set, l).unwrap().is_witnessed() {
                thick += 1;
                if upper_banach_density(&set, l).unwrap().value != Rational::from_integer(1) {
                    return fail(format!("sample {i}: thick at l={l} but upper density below 1"));
                }
            }
        }
    }
    pass(format!("{syndetic} syndetic sets, {thick} thick witnesses, zero violations"))
}

// 4 and 5 -------------------------------------------------------------------

const DEPTH: usize = 12;

fn as_bits(w: &Word) -> u32 {
    w.symbols().iter().enumerate().fold(0u32, |acc, (i, &s)| acc | (u32::from(s) << i))
}

/// Words of length `len >= |u|` beginning with `u`, as bit masks.
fn words_with_prefix(u: &Word, len: usize) -> impl Iterator<Item = u32> {
    let base = as_bits(u);
    let (fixed, free) = (u.len(), len - u.len());
    (0u32..1 << free).map(move |f| base | (f << fixed))
}

/// Least `m` for which two words in `[u]` differ inside every
/// `[k, k + depth)` for `k ∈ m + ks`, using words of length at most `DEPTH`.
fn oracle_broken(u: &Word, ks: &[usize], depth: usize, max_m: usize) -> Option<usize> {
    let kmax = *ks.last().unwrap();
    let mask = (1u32 << depth) - 1;
    for m in 0..=max_m {
        let len = (m + kmax + depth).max(u.len());
        assert!(len <= DEPTH);
        let words: Vec<u32> = words_with_prefix(u, len).collect();
        for (i, &a) in words.iter().enumerate() {
            for &b in &words[i + 1..] {
                if ks.iter().all(|&k| ((a ^ b) >> (m + k)) & mask != 0) {
                    return Some(m);
                }
            }
        }
    }
    None
}

/// Least `m >= 1` such that every target's first `depth` symbols can follow
/// a word of `[u]` after `m` steps.
fn oracle_tuple(u: &Word, targets: &[Word], depth: usize, max_m: usize) -> Option<usize> {
    let mask = (1u32 << depth) - 1;
    (1..=max_m).find(|&m| {
        let len = (m + depth).max(u.len());
        assert!(len <= DEPTH);
        targets.iter().all(|t| {
            let want = as_bits(&t.factor(0, depth));
            words_with_prefix(u, len).any(|y| (y >> m) & mask == want)
        })
    })
}

struct BrokenCase {
    delta: Rational,
    f: WindowedSet,
    l: usize,
    u: Cylinder,
}

fn broken_grid() -> Vec<BrokenCase> {
    let sets: Vec<(Vec<usize>, usize)> = vec![
        ((1..=1).collect(), 1),
        ((1..=2).collect(), 2),
        ((1..=4).collect(), 4),
        ((1..=6).collect(), 6),
        (vec![2, 5], 5),
        (vec![2, 4, 6], 6),
        (vec![3], 3),
        (vec![1, 4, 7], 7),
        ((1..=8).collect(), 8),
    ];
    let mut out = Vec::new();
    for den in [2u64, 4, 8] {
        for (elems, l) in &sets {
            for u in ["0", "1", "01", "110", "0110", "01101"] {
                let delta = Rational::new(1, den);
                let depth = separation_depth(&delta).unwrap();
                if l + depth > DEPTH {
                    continue;
                }
                out.push(BrokenCase { delta, f: WindowedSet::new(elems.clone(), 16).unwrap(), l: *l, u: cyl(u) });
            }
        }
    }
    out
}

fn budget_for(kmax: usize, depth: usize) -> SearchBudget {
    SearchBudget { max_m: DEPTH - kmax - depth, max_offsets: 1 << DEPTH }
}

fn detector_oracle() -> Outcome {
    let host = de_bruijn(2, DEPTH).unwrap();
    let mut configs = 0;
    let mut witnessed = 0;
    for (i, c) in broken_grid().iter().enumerate() {
        let ks: Vec<usize> = c.f.elements().iter().copied().filter(|&e| (1..=c.l).contains(&e)).collect();
        let depth = separation_depth(&c.delta).unwrap();
        let budget = budget_for(*ks.last().unwrap(), depth);
        let q = BrokenQuery { host: &host, n: 2, delta: c.delta, f: &c.f, l: c.l, u: &c.u };
        let report = broken_sensitivity_witness(&q, &budget).unwrap();
        let expected = oracle_broken(c.u.pattern(), &ks, depth, budget.max_m);
        if report.m != expected {
            return fail(format!("broken config {i}: detector m={:?}, oracle m={expected:?}", report.m));
        }
        if report.verdict.is_witnessed() {
            witnessed += 1;
            if !verify_witness(&q, &report).unwrap() {
                return fail(format!("broken config {i}: witness does not re-verify"));
            }
        }
        configs += 1;
    }
    let targets = [bits("0000"), bits("1111"), bits("0101"), bits("0011")];
    let pairs = [(0, 1), (2, 3), (0, 2)];
    for (num, den) in [(1u64, 1u64), (1, 2), (1, 4), (1, 8)] {
        let eps = Rational::new(num, den);
        let depth = closeness_depth(&eps).unwrap();
        for &(a, b) in &pairs {
            for u in ["0", "1", "01", "110", "0110"] {
                let tgt = vec![targets[a].clone(), targets[b].clone()];
                let spec = TupleSpec::new(host.clone(), tgt.clone()).unwrap();
                let u = cyl(u);
                let budget = SearchBudget { max_m: DEPTH - depth, max_offsets: 1 << DEPTH };
                let v = sensitive_tuple_check(&spec, &u, &eps, &budget).unwrap();
                let got = match v.evidence {
                    Some(Evidence::Offsets { m, .. }) => Some(m),
                    _ => None,
                };
                let expected = oracle_tuple(u.pattern(), &tgt, depth, budget.max_m);
                if got != expected {
                    return fail(format!("tuple eps={eps} targets {a},{b} U={u}: detector {got:?}, oracle {expected:?}"));
                }
                witnessed += usize::from(got.is_some());
                configs += 1;
            }
        }
    }
    if configs < 50 {
        return fail(format!("only {configs} configurations"));
    }
    pass(format!("{configs} configurations ({witnessed} witnessed), zero disagreements"))
}

fn definitional_identity() -> Outcome {
    let host = de_bruijn(2, DEPTH).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    let mut compared = 0;
    for c in broken_grid() {
        let key = (c.delta, c.l, c.u.to_string());
        if !seen.insert(key) {
            continue;
        }
        let depth = separation_depth(&c.delta).unwrap();
        let budget = budget_for(c.l, depth);
        let full = WindowedSet::from_predicate(c.l + 1, |t| t >= 1).unwrap();
        let q = BrokenQuery { host: &host, n: 2, delta: c.delta, f: &full, l: c.l, u: &c.u };
        let broken = broken_sensitivity_witness(&q, &budget).unwrap();
        let blocky = blockily_thick_witness(&host, 2, &c.delta, c.l - 1, &c.u, &budget).unwrap();
        if broken.verdict != blocky {
            return fail(format!("delta={} l={} U={}: {:?} vs {:?}", c.delta, c.l, c.u, broken.verdict, blocky));
        }
        compared += 1;
    }
    pass(format!("{compared} (delta, l, U) configurations give identical verdicts and witnesses"))
}

// 6 -------------------------------------------------------------------------

fn morse_asymptotics() -> Outcome {
    let r = 1usize << 12;
    let h = (1usize << 11) + 1;
    let omega = morse_two_sided(r).unwrap();
    let eta = eta_two_sided(r).unwrap();
    let pc = pair_classify(&omega, &eta, &Rational::new(1, 1 << 20), 64, h, h / 2).unwrap();
    for (k, d) in pc.distances.iter().enumerate() {
        if *d > Distance::Pow2(k as u32) {
            return fail(format!("d(σ^{k}ω, σ^{k}η) = {d} exceeds 2^-{k}"));
        }
    }
    if pc.range_limited != 0 {
        return fail("some readings were range-limited");
    }

    let horizon = 1usize << 10;
    let tail = horizon / 2;
    for n in [0usize, 1, 5, 16] {
        let w = omega.shift(n).unwrap();
        let e = eta.shift(n).unwrap();
        let (fw, fe) = (w.flip().unwrap(), e.flip().unwrap());
        let pool = [w, e, fw, fe];
        for skip in 0..4 {
            let tuple: Vec<_> = (0..4).filter(|&i| i != skip).map(|i| pool[i].clone()).collect();
            // every k in the tail: the asymptotic pair sits at exactly 2^-(n+k+1)
            for k in tail..horizon {
                let (d, _) = limsup_separation(&tuple, k + 1, k).unwrap();
                if d != Distance::Pow2((n + k + 1) as u32) {
                    return fail(format!("n={n}, tuple without {skip}: separation {d} at k={k}"));
                }
            }
            let (d, at) = limsup_separation(&tuple, horizon, tail).unwrap();
            if d != Distance::Pow2((n + tail + 1) as u32) || at != tail {
                return fail(format!("n={n}: tail proxy {d} at {at}"));
            }
        }
        for pair in [[pool[0].clone(), pool[1].clone()], [pool[2].clone(), pool[3].clone()]] {
            let (d, _) = limsup_separation(&pair, horizon, tail).unwrap();
            if d != Distance::Pow2((n + tail + 1) as u32) {
                return fail(format!("n={n}: asymptotic pair tail proxy {d}"));
            }
        }
        let (d, _) = limsup_separation(&[pool[0].clone(), pool[2].clone()], horizon, tail).unwrap();
        if d != Distance::ONE {
            return fail(format!("n={n}: flip pair should stay at distance 1, got {d}"));
        }
    }
    pass(format!(
        "d(σ^kω,σ^kη) <= 2^-k for k <= 2^11; tail separation of asymptotic pairs is exactly 2^-(n+k+1) for every tail k \
         (proxy over [{tail},{horizon}) is 2^-(n+{})), tending to 0",
        tail + 1
    ))
}

// 7 -------------------------------------------------------------------------

fn combination_paper_mode() -> Outcome {
    let (a2, _) = build_a(2, &BuildConfig::default()).unwrap();
    let (a1, _) = build_a(1, &BuildConfig::default()).unwrap();
    let digits = a2.to_digits();
    if !digits.starts_with(&format!("10{}", "0".repeat(200))) || !digits.ends_with(&format!("11{}", "0".repeat(200))) {
        return fail("A_2 does not open with 10 0^200 and close with 11 0^200");
    }
    let l = a1.len() * 100;
    let mut pairs = 0;
    for w1 in subblocks(&a1, a1.len()) {
        for w2 in subblocks(&a1, a1.len()) {
            let (n, v) = thickness_of_nuv(&a2, &w1, &w2, l, 1000).unwrap();
            let Some(Evidence::Interval { len, .. }) = v.evidence else {
                return fail(format!("N([{w1}],[{w2}]) not certified thick at l={l}"));
            };
            if len < l {
                return fail(format!("certified interval for ({w1},{w2}) has length {len}"));
            }
            let lo = a1.len() * 100 + w1.len();
            let hi = a1.len() * 200 + w1.len();
            if !(lo..=hi).all(|t| n.contains(t)) {
                return fail(format!("N([{w1}],[{w2}]) misses part of {{{lo}..{hi}}}"));
            }
            pairs += 1;
        }
    }
    pass(format!("|A_2| = {}, {pairs} subblock pairs certified thick at l={l}", a2.len()))
}

// 8 -------------------------------------------------------------------------

fn constant_factor_marks(w: &Word, n: usize) -> Vec<usize> {
    let s = w.symbols();
    let mut prefix = vec![0usize];
    for i in 0..=s.len() - n {
        let constant = s[i..i + n].iter().all(|&b| b == s[i]);
        prefix.push(prefix[i] + usize::from(constant));
    }
    prefix
}

/// Every window of length `>= min_len`, no shortcuts.
fn all_window_coverage(w: &Word, n: usize, min_len: usize) -> Rational {
    let prefix = constant_factor_marks(w, n);
    let len = w.len();
    let (mut bc, mut bp) = (1usize, 1usize);
    for l in min_len..=len {
        let p = l - n + 1;
        for s in 0..=len - l {
            let c = prefix[s + p] - prefix[s];
            if c * bp < bc * p {
                (bc, bp) = (c, p);
            }
        }
    }
    Rational::new(bc as u64, bp as u64)
}

fn paper_bound(b: u64) -> Rational {
    Rational::from_integer(1) - Rational::new(3, b - 1)
}

fn run_coverage_bound() -> Outcome {
    let (a2, _) = build_a(2, &BuildConfig::default()).unwrap();
    let rc = run_coverage(&a2, 2, 200).unwrap();
    let bound = paper_bound(100);
    if rc.value < bound {
        return fail(format!("paper mode coverage {} < {}", rc.value, bound));
    }
    let cfg = BuildConfig { gap_base: GapBase::Scaled, max_len: 1 << 26 };
    let (s2, _) = build_a(2, &cfg).unwrap();
    let b = GapBase::Scaled.at(2) as u64;
    let min_len = 2 * b as usize;
    let oracle = all_window_coverage(&s2, 2, min_len);
    let got = run_coverage(&s2, 2, min_len).unwrap();
    if got.value != oracle {
        return fail(format!("scaled mode: detector {} vs all-window oracle {}", got.value, oracle));
    }
    let scaled_bound = paper_bound(b);
    if oracle < scaled_bound {
        return fail(format!("scaled mode: oracle {oracle} below 1 - 3/(b-1) = {scaled_bound}"));
    }
    pass(format!(
        "paper: {} >= {bound}; scaled (b={b}, L={min_len}): oracle {oracle} = detector, >= {scaled_bound}",
        rc.value
    ))
}

// 9 -------------------------------------------------------------------------

fn unique_pubd_proxy() -> Outcome {
    let cfg = BuildConfig { gap_base: GapBase::Scaled, max_len: 1 << 26 };
    let (s2, _) = build_a(2, &cfg).unwrap();
    let b = GapBase::Scaled.at(2) as u64;
    let n = 2;
    let min_len = 2 * b as usize;
    let w = min_len - n + 1;
    let eps = Rational::new(3, b - 1);
    let horizon = 4096;
    let samples: Vec<usize> = (0..55).map(|i| i * 200).collect();
    let candidate = [cyl("00"), cyl("11")];
    let v = unique_pubd_recurrent_check(&s2, &samples, &candidate, w, &eps, horizon).unwrap();
    if !v.is_witnessed() {
        return fail(format!("scaled subshift: {:?}", v.evidence));
    }

    let db = de_bruijn(2, DEPTH).unwrap();
    let ones = occurrences(db.symbols(), &[1; DEPTH])[0];
    let mut full_samples = vec![ones];
    full_samples.extend((0..49).map(|i| i * 40));
    let v = unique_pubd_recurrent_check(&db, &full_samples, &[cyl("00")], w.min(DEPTH), &eps, 2048).unwrap();
    if v.is_witnessed() || v.evidence != Some(Evidence::FailedSample { index: 0 }) {
        return fail(format!("full shift: expected failure at the constant-1 sample, got {v:?}"));
    }
    pass(format!(
        "{} scaled samples pass lbd1 (w={w}, eps={eps}); full shift fails at the constant-1 point",
        samples.len()
    ))
}

// 10 ------------------------------------------------------------------------

fn run_cli(args: &[String]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with_args(std::iter::once("symdyn".to_string()).chain(args.iter().cloned()), &mut out, &mut err);
    (code, out)
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let sv = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    std::fs::write(p("evens.txt"), WindowedSet::from_predicate(256, |t| t % 2 == 0).unwrap().to_text()).unwrap();

    let gens = vec![
        sv(&["gen", "morse", "--length", "4096", "-o", &p("m.txt")]),
        sv(&["gen", "morse", "--radius", "512", "-o", &p("omega.txt")]),
        sv(&["gen", "eta", "--radius", "512", "-o", &p("eta.txt")]),
        sv(&["gen", "nmorse", "--q", "3", "--k", "6", "-o", &p("n.txt")]),
        sv(&["gen", "combination", "--k", "2", "--mode", "scaled", "-o", &p("a.txt")]),
        sv(&["gen", "debruijn", "--order", "10", "-o", &p("db.txt")]),
        sv(&["gen", "periodic", "--pattern", "01", "--length", "500", "-o", &p("per.txt")]),
    ];
    let analyses = vec![
        sv(&["famtest", "--set", &p("evens.txt"), "--family", "s", "--gap", "1"]),
        sv(&["famtest", "--random", "512", "--fill", "3/4", "--seed", "7", "--family", "lbd1", "--w", "32", "--eps", "1/2"]),
        sv(&["bd", "--set", &p("evens.txt"), "--schedule", "8,16,32"]),
        sv(&[
            "senswitness", "--host", &p("db.txt"), "--delta", "1/2", "--f-range", "1..8", "--l", "4", "8", "--cylinder",
            "@0:0", "@0:11", "--f-family", "t", "--f-family-l", "4",
        ]),
        sv(&["recur", "--host", &p("m.txt"), "--cylinder", "@0:0110", "--family", "s", "--gap", "16", "--horizon", "2048"]),
        sv(&["pairs", "--x", &p("omega.txt"), "--y", &p("eta.txt"), "--eps", "1/1024", "--w", "16", "--horizon", "256"]),
        sv(&["nuv", "--host", &p("a.txt"), "--w1", "1", "--w2", "0", "--l", "32", "--horizon", "200"]),
        sv(&["coverage", "--host", &p("a.txt"), "--n", "2", "--min-len", "32", "--gap-base", "16"]),
    ];
    let mut reports = Vec::new();
    for (i, args) in gens.iter().chain(&analyses).enumerate() {
        let (c1, o1) = run_cli(args);
        let file = args.iter().position(|a| a == "-o").map(|j| std::fs::read(&args[j + 1]).unwrap());
        let (c2, o2) = run_cli(args);
        let file2 = args.iter().position(|a| a == "-o").map(|j| std::fs::read(&args[j + 1]).unwrap());
        if c1 != 0 || c2 != 0 {
            return fail(format!("`{}` exited with {c1}/{c2}", args.join(" ")));
        }
        if o1 != o2 || file != file2 {
            return fail(format!("`{}` is not byte-identical across reruns", args[0]));
        }
        let path = p(&format!("report{i}.txt"));
        std::fs::write(&path, &o1).unwrap();
        reports.push(path);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut outputs = Vec::new();
    for round in 0..6 {
        let mut order = reports.clone();
        if round > 0 {
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
        }
        let (csv, plot, out) = (p(&format!("m{round}.csv")), p(&format!("m{round}.dat")), p(&format!("m{round}.txt")));
        let mut args = sv(&["merge"]);
        args.extend(order);
        args.extend(sv(&["--csv", &csv, "--plot", &plot, "--out", &out]));
        let (code, _) = run_cli(&args);
        if code != 0 {
            return fail(format!("merge exited with {code}"));
        }
        outputs.push((std::fs::read(&csv).unwrap(), std::fs::read(&plot).unwrap(), std::fs::read(&out).unwrap()));
    }
    if outputs.windows(2).any(|w| w[0] != w[1]) {
        return fail("merge output depends on report order");
    }
    pass(format!("{} commands rerun byte-identically; merge identical across 6 orderings", reports.len()))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 10] = [
        ("Morse golden test", morse_golden, Some(Duration::from_secs(1))),
        ("Density oracle", density_oracle, Some(Duration::from_secs(5))),
        ("Family hierarchy", family_hierarchy, None),
        ("Detector-oracle equivalence", detector_oracle, Some(Duration::from_secs(60))),
        ("Definitional identity", definitional_identity, None),
        ("Morse asymptotics", morse_asymptotics, None),
        ("Combination construction, paper mode", combination_paper_mode, Some(Duration::from_secs(120))),
        ("Run-coverage bound", run_coverage_bound, None),
        ("Unique pubd-recurrent proxy", unique_pubd_proxy, None),
        ("CLI determinism", cli_determinism, None),
    ];
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > *limit {
                outcome = fail(format!("took {elapsed:.2?}, limit {limit:?}; {}", outcome.detail));
            }
        }
        let tag = if outcome.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name} ({elapsed:.2?}): {}", i + 1, outcome.detail);
        failures += usize::from(!outcome.ok);
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
