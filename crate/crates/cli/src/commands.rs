use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nilgrowth::balls::{ball_growth, GrowthSeries};
use nilgrowth::groups::{GeneratingSet, GroupContext};
use nilgrowth::growth_profile::{envelope, growth_polynomial, loglog_profile, profile_deviation, DeviationReport};
use nilgrowth::heisenberg_scaling::{collapsing_grid, convergence_table, scaled_family_table};
use nilgrowth::lie_algebra::LieAlgebra;
use nilgrowth::progression::{LieProgression, OrderedProgression};
use nilgrowth::{Error, Q};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::descriptor::{parse_algebra, parse_descriptor, parse_elements};
use crate::number::{round15, sig15};
use crate::{CliError, Command, Common, Format, HeisenbergCommand, Output};

pub fn execute(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Growth { group, gens, max_m, common } => growth(&group, gens.as_deref(), max_m, &common),
        Command::Profile { algebra, lengths, c, compare_max_m, deviation_out, common } => {
            profile(&algebra, lengths, &c, compare_max_m, deviation_out, &common)
        }
        Command::Hdim { algebra, common } => hdim(&algebra, &common),
        Command::ProgCheck { group, algebra, gens, lengths, c, proper_m, common } => {
            prog_check(group.as_deref(), algebra.as_deref(), gens.as_deref(), lengths, &c, &proper_m, &common)
        }
        Command::Heisenberg { command } => match command {
            HeisenbergCommand::Collapse { i_max, j_max, max_m, common } => collapse(i_max, j_max, max_m, &common),
            HeisenbergCommand::ScaledFamily { n, f, common } => scaled_family(&n, f, &common),
            HeisenbergCommand::Cc { points, scales, common } => cc(&points, &scales, &common),
        },
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn parse_q(text: &str, what: &str) -> Result<Q, CliError> {
    text.trim().parse().map_err(|_| invalid(format!("bad {what}: {text:?}")))
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(round15(x)).map_or(Value::Null, Value::Number)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn format_or(common: &Common, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = common.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(invalid(format!("format {f:?} is not available for this command")))
    }
}

fn growth_json(label: &str, series: &GrowthSeries) -> Value {
    let records: Vec<Value> =
        series.records().iter().map(|r| json!({ "m": r.m, "ball": r.ball, "sphere": r.sphere })).collect();
    let overflow = series.overflow().map(|o| json!({ "radius": o.radius, "budget": o.budget }));
    json!({ "group": label, "records": records, "overflow": overflow })
}

fn growth(group: &str, gens: Option<&str>, max_m: usize, common: &Common) -> Result<Output, CliError> {
    let format = format_or(common, Format::Csv, &[Format::Csv, Format::Json])?;
    let budget = common.budget()?;
    let desc = parse_descriptor(group)?.with_gens(gens)?;
    let s = desc.generating_set()?;
    let series = ball_growth(&s, max_m, budget);
    let body = match format {
        Format::Json => pretty(&growth_json(&desc.to_string(), &series)),
        _ => series.to_csv(),
    };
    let mut out = Output { overflow: !series.is_complete(), ..Output::default() };
    out.emit(common.out.as_deref(), body);
    Ok(out)
}

/// `m,log_ball,profile,residual`, floats at 15 significant digits.
pub fn deviation_csv(report: &DeviationReport, series: &GrowthSeries) -> String {
    let mut s = String::from("m,log_ball,profile,residual\n");
    for r in &report.rows {
        writeln!(s, "{},{},{},{}", r.m, sig15(r.log_ball), sig15(r.profile), sig15(r.residual)).unwrap();
    }
    if let Some(o) = series.overflow() {
        writeln!(s, "overflow,{},{},", o.radius, o.budget).unwrap();
    }
    s
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn profile(
    algebra: &str,
    lengths: Vec<u64>,
    c: &str,
    compare_max_m: Option<usize>,
    deviation_out: Option<PathBuf>,
    common: &Common,
) -> Result<Output, CliError> {
    format_or(common, Format::Json, &[Format::Json])?;
    let budget = common.budget()?;
    let alg = parse_algebra(algebra)?;
    let p = LieProgression::new(alg, lengths.clone(), parse_q(c, "constant C")?)?;
    let f = growth_polynomial(&p)?;
    let h = envelope(&f)?;
    let prof = loglog_profile(&h);
    let piece = |degree: u32, coeff: &Q| json!({ "degree": degree, "coeff": coeff.to_string() });
    let mut doc = json!({
        "lengths": lengths,
        "polynomial": {
            "text": f.to_string(),
            "terms": f.terms().iter().map(|(&k, c)| piece(k, c)).collect::<Vec<_>>(),
        },
        "envelope": h.pieces().iter().map(|pc| piece(pc.degree, &pc.coeff)).collect::<Vec<_>>(),
        "breakpoints": prof.breakpoints().iter().map(|b| json!({
            "ratio": b.ratio.to_string(),
            "root": b.root,
            "position": float(b.position()),
            "log_position": float(b.log_position()),
        })).collect::<Vec<_>>(),
        "slopes": prof.slopes(),
    });
    let mut out = Output::default();
    if let Some(max_m) = compare_max_m {
        let elems = p.ordered().enumerate(budget)?.elements;
        let s = GeneratingSet::symmetrize(p.context().clone(), elems)?;
        let series = ball_growth(&s, max_m, budget);
        let report = profile_deviation(&series, &prof)?;
        doc["deviation"] = json!({
            "max_m": series.max_radius(),
            "complete": series.is_complete(),
            "min": float(report.min),
            "max": float(report.max),
            "spread": float(report.spread()),
        });
        out.overflow = !series.is_complete();
        let path = deviation_out.or_else(|| common.out.as_deref().map(|o| sibling(o, "deviation.csv")));
        if let Some(path) = path {
            out.files.push((path, deviation_csv(&report, &series)));
        }
    }
    out.emit(common.out.as_deref(), pretty(&doc));
    Ok(out)
}

fn hdim(algebra: &str, common: &Common) -> Result<Output, CliError> {
    let format = format_or(common, Format::Text, &[Format::Text, Format::Csv, Format::Json])?;
    let alg = parse_algebra(algebra)?;
    let (dim, hdim) = (alg.dim(), alg.homogeneous_dimension()?);
    let body = match format {
        Format::Text => format!("dim={dim} hdim={hdim}\n"),
        Format::Csv => format!("dim,hdim\n{dim},{hdim}\n"),
        Format::Json => pretty(&json!({ "dim": dim, "hdim": hdim })),
    };
    let mut out = Output::default();
    out.emit(common.out.as_deref(), body);
    Ok(out)
}

fn key_value_body(format: Format, rows: &[(&str, String)]) -> String {
    match format {
        Format::Text => rows.iter().map(|(k, v)| format!("{k}={v}\n")).collect(),
        Format::Csv => {
            let keys: Vec<&str> = rows.iter().map(|r| r.0).collect();
            let vals: Vec<&str> = rows.iter().map(|r| r.1.as_str()).collect();
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
        Format::Json => {
            let map: serde_json::Map<String, Value> =
                rows.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
            pretty(&Value::Object(map))
        }
    }
}

fn prog_check(
    group: Option<&str>,
    algebra: Option<&str>,
    gens: Option<&str>,
    lengths: Vec<u64>,
    c: &str,
    proper_m: &str,
    common: &Common,
) -> Result<Output, CliError> {
    let format = format_or(common, Format::Text, &[Format::Text, Format::Csv, Format::Json])?;
    let budget = common.budget()?;
    let c = parse_q(c, "constant C")?;
    let m = parse_q(proper_m, "properness scale")?;
    let mut rows: Vec<(&str, String)> = Vec::new();
    let (ctx, generators): (GroupContext, _) = match (group, algebra) {
        (_, Some(a)) => {
            let alg: LieAlgebra = parse_algebra(a)?;
            let lq: Vec<Q> = lengths.iter().map(|&l| Q::from_integer((l as i64).into())).collect();
            rows.push(("lie_upper_triangular", alg.upper_triangular_check(&lq, &c)?.to_string()));
            let ctx = GroupContext::lie_lattice(alg)?;
            let g = match gens {
                None | Some("standard") => ctx.standard_generators(),
                Some(text) => parse_elements(&ctx, text)?,
            };
            (ctx, g)
        }
        (Some(gr), None) => {
            let ctx = parse_descriptor(gr)?.context()?;
            let g = match gens {
                None | Some("standard") => ctx.standard_generators(),
                Some(text) => parse_elements(&ctx, text)?,
            };
            (ctx, g)
        }
        (None, None) => return Err(invalid("one of --group or --algebra is required")),
    };
    let p = OrderedProgression::new(ctx, generators, lengths)?;
    rows.push(("rank", p.rank().to_string()));
    let mut out = Output::default();
    let checks = (|| -> nilgrowth::Result<()> {
        let e = p.enumerate(budget)?;
        rows.push(("raw", e.raw_count.to_string()));
        rows.push(("size", e.elements.len().to_string()));
        rows.push(("upper_triangular", p.upper_triangular_check(&c, budget)?.to_string()));
        rows.push(("proper", p.is_m_proper(&m, budget)?.to_string()));
        Ok(())
    })();
    match checks {
        Ok(()) => {}
        Err(Error::BudgetExceeded { budget }) => {
            rows.push(("overflow", budget.to_string()));
            out.overflow = true;
        }
        Err(e) => return Err(e.into()),
    }
    out.emit(common.out.as_deref(), key_value_body(format, &rows));
    Ok(out)
}

fn collapse(i_max: u64, j_max: u64, max_m: u64, common: &Common) -> Result<Output, CliError> {
    format_or(common, Format::Csv, &[Format::Csv])?;
    let rows = collapsing_grid(i_max, j_max, max_m, common.budget()?)?;
    let mut s = String::from("i,j,m,required,equal\n");
    let mut out = Output::default();
    for r in &rows {
        let equal = match r.equal {
            Some(e) => e.to_string(),
            None => {
                out.overflow = true;
                "overflow".into()
            }
        };
        writeln!(s, "{},{},{},{},{}", r.i, r.j, r.m, r.required, equal).unwrap();
    }
    out.emit(common.out.as_deref(), s);
    Ok(out)
}

fn q_cols(x: &Q) -> String {
    format!("{},{}", x, sig15(x.to_f64().unwrap_or(f64::NAN)))
}

fn scaled_family(ns: &[u64], f: u64, common: &Common) -> Result<Output, CliError> {
    format_or(common, Format::Csv, &[Format::Csv])?;
    let spec: Vec<(u64, u64)> = ns.iter().map(|&n| (n, f)).collect();
    let rows = scaled_family_table(&spec, common.budget()?)?;
    let mut s = String::from(
        "n,f,a,s_size,ball,radius,partial,ratio,ratio_f,s_normalized,s_normalized_f,ball_normalized,ball_normalized_f\n",
    );
    let mut out = Output::default();
    for r in &rows {
        out.overflow |= r.partial;
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.f,
            r.a,
            r.s_size,
            r.ball,
            r.radius,
            r.partial,
            q_cols(&r.ratio),
            q_cols(&r.s_normalized),
            q_cols(&r.ball_normalized)
        )
        .unwrap();
    }
    out.emit(common.out.as_deref(), s);
    Ok(out)
}

fn parse_point(text: &str) -> Result<[Q; 3], CliError> {
    let v: Vec<Q> = text.split(',').map(|c| parse_q(c, "coordinate")).collect::<Result<_, _>>()?;
    <[Q; 3]>::try_from(v).map_err(|_| invalid(format!("a point needs three coordinates: {text:?}")))
}

fn parse_scale(text: &str) -> Result<(u64, u64), CliError> {
    let bad = || invalid(format!("scale must be N:q, got {text:?}"));
    let (n, q) = text.split_once(':').ok_or_else(bad)?;
    Ok((n.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

fn cc(points: &str, scales: &str, common: &Common) -> Result<Output, CliError> {
    format_or(common, Format::Csv, &[Format::Csv])?;
    let budget = common.budget()?;
    let pts: Vec<[Q; 3]> = points.split(';').map(parse_point).collect::<Result<_, _>>()?;
    let scs: Vec<(u64, u64)> = scales.split(',').map(parse_scale).collect::<Result<_, _>>()?;
    let mut s = String::from("point,n,q,estimate,estimate_f\n");
    let mut out = Output::default();
    for &(n, qq) in &scs {
        match convergence_table(&pts, &[(n, qq)], budget) {
            Ok(t) => {
                for (p, est) in pts.iter().zip(&t.estimates) {
                    let label = format!("({} {} {})", p[0], p[1], p[2]);
                    writeln!(s, "{label},{n},{qq},{}", q_cols(&est[0])).unwrap();
                }
            }
            Err(Error::BudgetExceeded { budget }) => {
                writeln!(s, "overflow,{n},{qq},{budget},").unwrap();
                out.overflow = true;
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    out.emit(common.out.as_deref(), s);
    Ok(out)
}
