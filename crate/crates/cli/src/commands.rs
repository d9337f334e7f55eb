use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tamecut::fourier::{a_norm_torus, a_norm_torus_levels, dirichlet_l1_big, TrigPoly, DEFAULT_GRID_BUDGET};
use tamecut::groups::{ball, BallCache, Group, GroupSpec, DEFAULT_BUDGET};
use tamecut::opnorm::{lambda_norm_lower, rd_fit, rd_test, FinSuppFun, SpectralOptions};
use tamecut::tamecuts::{fit_growth, verify_cut, BuildOptions, CutFamily, VerifyOptions};

use crate::args::{CacheAction, Cli, Command, Common, CutArgs, GroupArgs};
use crate::report::{method_tag, Row};
use crate::CliError;

pub type Config = BTreeMap<String, Value>;
type Outcome = Result<(Value, Vec<Row>), CliError>;

struct Ctx<'a> {
    common: &'a Common,
    cache: Option<BallCache>,
}

impl Ctx<'_> {
    fn budget(&self) -> usize {
        self.common.budget.unwrap_or(DEFAULT_BUDGET)
    }

    fn cache(&self) -> Option<&BallCache> {
        self.cache.as_ref()
    }

    fn spectral(&self) -> SpectralOptions {
        SpectralOptions { seed: self.common.seed, budget: self.budget(), ..Default::default() }
    }

    fn build_options(&self) -> BuildOptions<'_> {
        BuildOptions { budget: self.budget(), tol: self.common.tol, cache: self.cache() }
    }
}

/// Runs the command, filling `config` with the resolved parameters as it goes
/// so that failed runs still report what was attempted.
pub fn run(cli: &Cli, config: &mut Config) -> Outcome {
    let common = &cli.common;
    if !(common.tol > 0.0 && common.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", common.tol)));
    }
    let cache = (!common.no_cache).then(|| BallCache::resolve(common.cache_dir.as_deref()));
    let ctx = Ctx { common, cache };
    config.insert("format".into(), json!(common.format));
    config.insert("tol".into(), json!(common.tol));
    config.insert("seed".into(), json!(common.seed));
    config.insert("cache".into(), json!(ctx.cache.is_some()));
    match &cli.command {
        Command::Ball { group, n } => ball_cmd(&ctx, config, group, *n),
        Command::Dirichlet { n } => dirichlet_cmd(&ctx, config, n),
        Command::Anorm { coeffs } => anorm_cmd(&ctx, config, coeffs),
        Command::Hardy { set, interval, random, range, samples } => {
            hardy_cmd(&ctx, config, set.as_deref(), *interval, *random, *range, *samples)
        }
        Command::Lambda { group, coeffs, ball_indicator, radius } => {
            lambda_cmd(&ctx, config, group, coeffs.as_deref(), *ball_indicator, *radius)
        }
        Command::RdFit { group, n, samples } => rd_cmd(&ctx, config, group, *n, *samples),
        Command::Cut(args) => cut_cmd(&ctx, config, args),
        Command::Verify { cut, probes, probe_radius } => verify_cmd(&ctx, config, cut, *probes, *probe_radius),
        Command::FitGrowth(args) => fit_cmd(&ctx, config, args),
        Command::Cache { action } => cache_cmd(&ctx, config, action),
    }
}

fn group_config(config: &mut Config, args: &GroupArgs) -> Result<GroupSpec, CliError> {
    let spec = args.spec()?;
    config.insert("group".into(), json!(spec));
    Ok(spec)
}

fn ball_cmd(ctx: &Ctx, config: &mut Config, args: &GroupArgs, n: u32) -> Outcome {
    let spec = group_config(config, args)?;
    config.insert("n".into(), json!(n));
    config.insert("budget".into(), json!(ctx.budget()));
    let g = Group::new(spec.clone())?;
    let b = ball(&g, n, ctx.budget(), ctx.cache())?;
    let mut spheres = vec![0usize; n as usize + 1];
    for &l in b.lengths() {
        spheres[l as usize] += 1;
    }
    let mut total = 0;
    let balls: Vec<usize> = spheres
        .iter()
        .map(|s| {
            total += s;
            total
        })
        .collect();
    let rows = balls
        .iter()
        .enumerate()
        .map(|(r, &size)| Row::exact(vec![("group", spec.to_string()), ("radius", r.to_string())], size as f64, "bfs"))
        .collect();
    Ok((json!({ "size": b.len(), "sphere_sizes": spheres, "ball_sizes": balls }), rows))
}

fn dirichlet_cmd(ctx: &Ctx, config: &mut Config, n: &str) -> Outcome {
    let big: BigUint =
        n.trim().parse().map_err(|_| CliError::Usage(format!("--n must be a nonnegative integer, got {n:?}")))?;
    config.insert("n".into(), json!(big.to_string()));
    let cert = dirichlet_l1_big(&big, ctx.common.tol)?;
    let rows = vec![Row::from_cert(vec![("n", big.to_string())], &cert)];
    Ok((json!({ "value": cert.value(), "certificate": cert }), rows))
}

fn parse_trig(text: &str) -> Result<TrigPoly, CliError> {
    let mut terms = Vec::new();
    for entry in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, val) = entry.split_once('=').ok_or_else(|| CliError::Usage(format!("term {entry:?} lacks '='")))?;
        let k = key
            .split(',')
            .map(|s| s.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CliError::Usage(format!("bad frequency {key:?}")))?;
        terms.push((k, parse_complex(val)?));
    }
    let dim = terms.first().map(|t| t.0.len()).ok_or_else(|| CliError::Usage("no coefficients given".into()))?;
    Ok(TrigPoly::from_terms(dim, terms)?)
}

fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("bad coefficient {text:?}"));
    let (re, im) = text.split_once(':').unwrap_or((text, "0"));
    Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?))
}

fn anorm_cmd(ctx: &Ctx, config: &mut Config, coeffs: &str) -> Outcome {
    let f = parse_trig(coeffs)?;
    let budget = ctx.common.budget.unwrap_or(DEFAULT_GRID_BUDGET);
    config.insert("coeffs".into(), json!(coeffs));
    config.insert("budget".into(), json!(budget));
    let levels = a_norm_torus_levels(&f, ctx.common.tol, budget)?;
    let last = levels.last().expect("at least one level").clone();
    let rows = levels
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let grid = c.grid.map(|g| g.to_string()).unwrap_or_default();
            Row::from_cert(vec![("level", i.to_string()), ("grid", grid)], c)
        })
        .collect();
    Ok((
        json!({ "dim": f.dim(), "terms": f.len(), "value": last.value(), "certificate": last, "levels": levels }),
        rows,
    ))
}

fn hardy_cmd(
    ctx: &Ctx,
    config: &mut Config,
    set: Option<&[i64]>,
    interval: Option<usize>,
    random: Option<usize>,
    range: i64,
    samples: usize,
) -> Outcome {
    let sets: Vec<Vec<i64>> = match (set, interval, random) {
        (Some(s), _, _) => {
            config.insert("set".into(), json!(s));
            vec![s.to_vec()]
        }
        (_, Some(m), _) => {
            config.insert("interval".into(), json!(m));
            vec![(0..m as i64).collect()]
        }
        (_, _, Some(size)) => {
            if range < 0 || (size as u128) > 2 * range as u128 + 1 {
                return Err(CliError::Usage(format!("cannot draw {size} distinct points from [−{range}, {range}]")));
            }
            config.insert("random".into(), json!(size));
            config.insert("range".into(), json!(range));
            config.insert("samples".into(), json!(samples));
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.common.seed);
            (0..samples)
                .map(|_| {
                    let idx = rand::seq::index::sample(&mut rng, (2 * range + 1) as usize, size);
                    idx.into_iter().map(|i| i as i64 - range).collect()
                })
                .collect()
        }
        _ => return Err(CliError::Usage("give --set, --interval or --random".into())),
    };
    let mut results = Vec::new();
    let mut rows = Vec::new();
    for (i, mut b) in sets.into_iter().enumerate() {
        b.sort_unstable();
        b.dedup();
        if b.len() < 2 {
            return Err(CliError::Usage(format!("|B| = {} but the ratio needs |B| ≥ 2", b.len())));
        }
        let cert = a_norm_torus(&TrigPoly::indicator(b.iter().copied()), ctx.common.tol)?;
        let ln = (b.len() as f64).ln();
        let (lo, hi) = (cert.lower / ln, cert.upper / ln);
        rows.push(Row {
            params: vec![("sample", i.to_string()), ("size", b.len().to_string())],
            value: 0.5 * (lo + hi),
            lower: lo,
            upper: hi,
            method: method_tag(cert.method),
        });
        results.push(json!({ "size": b.len(), "ratio_lower": lo, "ratio_upper": hi, "certificate": cert }));
    }
    let min = rows.iter().map(|r| r.lower).fold(f64::INFINITY, f64::min);
    Ok((json!({ "min_ratio_lower": min, "sets": results }), rows))
}

fn lambda_cmd(
    ctx: &Ctx,
    config: &mut Config,
    args: &GroupArgs,
    coeffs: Option<&str>,
    ball_indicator: Option<u32>,
    radius: u32,
) -> Outcome {
    let spec = group_config(config, args)?;
    config.insert("radius".into(), json!(radius));
    config.insert("budget".into(), json!(ctx.budget()));
    let g = Group::new(spec.clone())?;
    let f = match (coeffs, ball_indicator) {
        (Some(text), _) => {
            config.insert("coeffs".into(), json!(text));
            let mut f = FinSuppFun::new(spec.clone());
            for entry in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                let (word, val) =
                    entry.split_once('=').ok_or_else(|| CliError::Usage(format!("term {entry:?} lacks '='")))?;
                let word = word.trim();
                let x = if word == "e" { g.identity() } else { g.parse(word)? };
                f.add(x, parse_complex(val)?);
            }
            f
        }
        (None, Some(m)) => {
            config.insert("ball_indicator".into(), json!(m));
            let b = ball(&g, m, ctx.budget(), ctx.cache())?;
            FinSuppFun::indicator(spec.clone(), b.members())
        }
        (None, None) => return Err(CliError::Usage("give --coeffs or --ball-indicator".into())),
    };
    let est = lambda_norm_lower(&g, &f, radius, &ctx.spectral())?;
    let row = Row {
        params: vec![("group", spec.to_string()), ("radius", radius.to_string())],
        value: est.lower,
        lower: est.lower,
        upper: est.l1_upper,
        method: "power-iteration".into(),
    };
    Ok((json!(est), vec![row]))
}

fn rd_cmd(ctx: &Ctx, config: &mut Config, args: &GroupArgs, n: u32, samples: usize) -> Outcome {
    let spec = group_config(config, args)?;
    config.insert("n".into(), json!(n));
    config.insert("samples".into(), json!(samples));
    config.insert("budget".into(), json!(ctx.budget()));
    if n < 3 || samples == 0 {
        return Err(CliError::Usage("rd-fit needs --n ≥ 3 and at least one sample".into()));
    }
    let g = Group::new(spec)?;
    let mut all = Vec::new();
    let mut rows = Vec::new();
    for m in 1..=n {
        let size = ball(&g, m, ctx.budget(), ctx.cache())?.len();
        let opts = ctx.spectral();
        let batch = rd_test(&g, m, samples, ctx.common.seed.wrapping_add(m as u64), &opts)?;
        for (i, s) in batch.iter().enumerate() {
            rows.push(Row {
                params: vec![("n", m.to_string()), ("sample", i.to_string())],
                value: s.ratio,
                lower: s.ratio,
                upper: (size as f64).sqrt(),
                method: "power-iteration".into(),
            });
        }
        all.extend(batch);
    }
    let fit = rd_fit(&all)?;
    Ok((json!({ "fit": fit, "samples": all }), rows))
}

fn family(ctx: &Ctx, config: &mut Config, args: &CutArgs) -> Result<CutFamily, CliError> {
    let spec = group_config(config, &args.group)?;
    let indices = args.indices()?;
    config.insert("indices".into(), json!(indices));
    config.insert("construction".into(), json!(args.construction.name()));
    config.insert("extend".into(), json!(args.extend));
    config.insert("budget".into(), json!(ctx.budget()));
    let construction = args.construction.resolve();
    let opts = ctx.build_options();
    Ok(CutFamily::build(&indices, |n| construction.build(&spec, n, args.extend, &opts))?)
}

fn cut_cmd(ctx: &Ctx, config: &mut Config, args: &CutArgs) -> Outcome {
    let fam = family(ctx, config, args)?;
    let rows = fam
        .cuts
        .iter()
        .map(|c| {
            Row::from_cert(
                vec![("n", c.n.to_string()), ("construction", c.provenance.construction.clone())],
                &c.norm_cert,
            )
        })
        .collect();
    let cuts: Vec<_> = fam.cuts.iter().map(|c| c.summary()).collect();
    Ok((json!({ "cuts": cuts, "growth_fit": fam.growth_fit }), rows))
}

fn verify_cmd(ctx: &Ctx, config: &mut Config, args: &CutArgs, probes: usize, probe_radius: Option<u32>) -> Outcome {
    let fam = family(ctx, config, args)?;
    config.insert("probes".into(), json!(probes));
    config.insert("probe_radius".into(), json!(probe_radius));
    let opts = VerifyOptions {
        budget: ctx.budget(),
        probe_radius,
        probes,
        seed: ctx.common.seed,
        spectral: ctx.spectral(),
        cache: ctx.cache(),
    };
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for cut in &fam.cuts {
        let report = verify_cut(cut, &opts)?;
        rows.push(Row {
            params: vec![
                ("n", cut.n.to_string()),
                ("covers_ball", report.covers_ball.to_string()),
                ("consistency", report.consistency.to_string()),
            ],
            value: report.norm_lower,
            lower: cut.norm_cert.lower,
            upper: cut.norm_cert.upper,
            method: method_tag(cut.norm_cert.method),
        });
        entries.push(json!({ "cut": cut.summary(), "verification": report }));
    }
    let covers = entries.iter().all(|e| e["verification"]["covers_ball"] == json!(true));
    let consistent = entries.iter().all(|e| e["verification"]["consistency"] == json!(true));
    Ok((
        json!({ "all_cover": covers, "all_consistent": consistent, "cuts": entries, "growth_fit": fam.growth_fit }),
        rows,
    ))
}

fn fit_cmd(ctx: &Ctx, config: &mut Config, args: &CutArgs) -> Outcome {
    let fam = family(ctx, config, args)?;
    let fit = fit_growth(&fam)?;
    let rows = fam.cuts.iter().map(|c| Row::from_cert(vec![("n", c.n.to_string())], &c.norm_cert)).collect();
    let uppers: Vec<f64> = fam.cuts.iter().map(|c| c.norm_cert.upper).collect();
    Ok((json!({ "c": fit.c, "a": fit.a, "bounded": fit.a == 0.0, "indices": fam.indices(), "uppers": uppers }), rows))
}

fn cache_cmd(ctx: &Ctx, config: &mut Config, action: &CacheAction) -> Outcome {
    let cache = BallCache::resolve(ctx.common.cache_dir.as_deref());
    match action {
        CacheAction::List => {
            config.insert("action".into(), json!("list"));
            let entries = cache.entries()?;
            let rows = entries
                .iter()
                .map(|(d, r)| Row::exact(vec![("digest", d.clone())], *r as f64, "cache-entry"))
                .collect();
            let list: Vec<_> = entries.iter().map(|(d, r)| json!({ "digest": d, "radius": r })).collect();
            Ok((json!({ "entries": list }), rows))
        }
        CacheAction::Clear => {
            config.insert("action".into(), json!("clear"));
            let removed = cache.clear()?;
            Ok((json!({ "removed": removed }), vec![Row::exact(vec![], removed as f64, "cache-clear")]))
        }
        CacheAction::Build { group, n } => {
            config.insert("action".into(), json!("build"));
            let spec = group_config(config, group)?;
            config.insert("n".into(), json!(n));
            config.insert("budget".into(), json!(ctx.budget()));
            let g = Group::new(spec.clone())?;
            let b = ball(&g, *n, ctx.budget(), Some(&cache))?;
            let row = Row::exact(vec![("digest", spec.digest()), ("radius", n.to_string())], b.len() as f64, "bfs");
            Ok((json!({ "digest": spec.digest(), "radius": n, "size": b.len() }), vec![row]))
        }
    }
}
