mod args;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, Global, MRange, OutFormat, Problem, SearchMethod};
use irrsobol::construct::{
    build_sequence, default_rows, DirectionSource, GeneratingMatrix, MatrixRecord, SequenceSpec,
};
use irrsobol::experiments::{
    mc_estimate, rqmc_estimate, Integrand, QueueIntegrand, QueueModel, RqmcConfig, TestFunction,
};
use irrsobol::formats::{parse_joe_kuo, DirectionTable};
use irrsobol::galois::{enumerate_irreducibles, irreducibles_of_degree, Field, Polynomial};
use irrsobol::points::{write_binary, PointGenerator};
use irrsobol::quality::{
    property_report, t_profile, DqParams, PiParams, ProfileOptions, ProjectionFamily,
};
use irrsobol::search::{search_one_row, search_two_step, SearchConfig};
use irrsobol::Error;

/// A result in every supported format.
struct Output {
    json: Value,
    csv: String,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli) -> irrsobol::Result<()> {
    let g = &cli.global;
    let threads = if g.deterministic { Some(1) } else { g.threads };
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let out = match &cli.command {
        Command::Polys { count, degree } => polys(g, *count, *degree)?,
        Command::Matrix { rows, cols, import } => matrix(g, *rows, *cols, import.as_deref())?,
        Command::Points {
            count,
            skip,
            shift,
            replication,
            binary,
        } => points(g, *count, *skip, *shift, *replication, binary.as_deref())?,
        Command::Assess {
            order,
            d,
            w2,
            w,
            m,
            alpha_zero,
            tau_scale,
        } => {
            let d = d.unwrap_or(g.dim);
            let windows = match (w2, w) {
                (Some(w2), _) => vec![*w2],
                (None, Some(w)) => w.clone(),
                (None, None) => vec![d; order.saturating_sub(1)],
            };
            let family = ProjectionFamily::new(*order, d, windows)?;
            let options = ProfileOptions {
                m_step: m.step,
                alpha_zero: *alpha_zero,
                tau_scale: *tau_scale,
            };
            assess(g, &family, *m, options)?
        }
        Command::Propa { d, k } => propa(g, d.unwrap_or(g.dim), *k)?,
        Command::Search {
            method,
            budget,
            omega,
            k1,
            k2,
            q,
            m_min,
            m_max,
            l2,
            weight,
            progress,
        } => {
            if g.base != 2 {
                return Err(Error::InvalidArgument("searches are implemented for base 2".into()));
            }
            let cfg = SearchConfig {
                ordering: g.ordering,
                dimension: g.dim,
                budget: *budget,
                pi: PiParams {
                    omega: *omega,
                    k1: *k1,
                    k2: *k2,
                },
                dq: DqParams {
                    q: *q,
                    m_min: *m_min,
                    m_max: *m_max,
                    l2: *l2,
                    w: *weight,
                },
                seed: g.seed,
                verbose: *progress,
            };
            search(&cfg, *method)?
        }
        Command::Integrate {
            problem,
            variant,
            horizon,
            target,
            reps,
            m,
            mc,
        } => {
            let integrand: Box<dyn Integrand> = match problem {
                Problem::F1 => Box::new(TestFunction {
                    dimension: g.dim,
                    variant: *variant,
                }),
                Problem::Queue => Box::new(QueueIntegrand {
                    model: QueueModel::new(*horizon)?,
                    output: (*target).into(),
                }),
            };
            let cfg = RqmcConfig {
                replications: *reps,
                m_min: m.lo,
                m_max: m.hi,
                seed: g.seed,
                deterministic: g.deterministic,
            };
            integrate(g, integrand.as_ref(), &cfg, *mc)?
        }
    };
    emit(g, out)
}

fn emit(g: &Global, out: Output) -> irrsobol::Result<()> {
    let format = g.out.unwrap_or(if g.output.is_none() && io::stdout().is_terminal() {
        OutFormat::Text
    } else {
        OutFormat::Json
    });
    let mut body = match format {
        OutFormat::Json => serde_json::to_string_pretty(&out.json)?,
        OutFormat::Csv => out.csv,
        OutFormat::Text => out.text,
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &g.output {
        Some(path) => fs::write(path, body)?,
        None => io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn read(path: &Path) -> irrsobol::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn direction_source(g: &Global) -> irrsobol::Result<DirectionSource> {
    let given = [g.directions.is_some(), g.joe_kuo.is_some(), g.one_row.is_some()]
        .iter()
        .filter(|&&x| x)
        .count();
    if given > 1 {
        return Err(Error::InvalidArgument(
            "--directions, --joe-kuo and --one-row are mutually exclusive".into(),
        ));
    }
    if let Some(p) = &g.directions {
        return Ok(DirectionSource::Table(DirectionTable::from_json(&read(p)?)?));
    }
    if let Some(p) = &g.joe_kuo {
        return Ok(DirectionSource::JoeKuo(parse_joe_kuo(&read(p)?)?));
    }
    if let Some(p) = &g.one_row {
        let rows: Vec<Vec<u32>> = serde_json::from_str(&read(p)?)?;
        return Ok(DirectionSource::OneRow(rows));
    }
    Ok(DirectionSource::Derived)
}

fn sequence(g: &Global, dim: usize, cols: usize) -> irrsobol::Result<Vec<GeneratingMatrix>> {
    let spec = SequenceSpec {
        base: g.base,
        dimension: dim,
        construction: g.construction,
        ordering: g.ordering,
        directions: direction_source(g)?,
    };
    let rows = default_rows(g.base);
    build_sequence(&spec, rows, cols.max(rows))
}

fn polys(g: &Global, count: Option<usize>, degree: Option<usize>) -> irrsobol::Result<Output> {
    let field = Field::with_order(g.base as u64)?;
    let list: Vec<Polynomial> = match degree {
        Some(e) => irreducibles_of_degree(&field, e),
        None => enumerate_irreducibles(&field, count.unwrap_or(g.dim), g.ordering),
    };
    let mut csv = String::from("index,degree,code,polynomial\n");
    let mut text = format!("{:>6} {:>6} {:>10}  polynomial\n", "index", "degree", "code");
    let mut json = Vec::new();
    for (i, p) in list.iter().enumerate() {
        let e = p.degree().unwrap_or(0);
        let _ = writeln!(csv, "{},{},{},{}", i + 1, e, p.code(), p);
        let _ = writeln!(text, "{:>6} {:>6} {:>10}  {}", i + 1, e, p.code(), p);
        json.push(json!({"index": i + 1, "degree": e, "code": p.code(), "polynomial": p.to_string()}));
    }
    Ok(Output {
        json: Value::Array(json),
        csv,
        text,
    })
}

fn matrix(
    g: &Global,
    rows: Option<usize>,
    cols: Option<usize>,
    import: Option<&Path>,
) -> irrsobol::Result<Output> {
    let matrices = match import {
        Some(path) => {
            let records: Vec<MatrixRecord> = serde_json::from_str(&read(path)?)?;
            records
                .iter()
                .map(GeneratingMatrix::from_record)
                .collect::<irrsobol::Result<Vec<_>>>()?
        }
        None => {
            let r = rows.unwrap_or_else(|| default_rows(g.base));
            let c = cols.unwrap_or(r);
            let seq = sequence(g, g.dim, c.max(r))?;
            seq.iter()
                .map(|m| m.with_extent(r, c))
                .collect::<irrsobol::Result<Vec<_>>>()?
        }
    };
    let records: Vec<MatrixRecord> = matrices.iter().map(|m| m.to_record()).collect();
    let mut csv = String::new();
    let mut text = String::new();
    for (i, m) in matrices.iter().enumerate() {
        let _ = writeln!(csv, "# dimension {} polynomial {}", i + 1, m.polynomial().code());
        csv.push_str(&m.to_csv());
        let _ = writeln!(text, "dimension {}: {}", i + 1, m.polynomial());
        for r in 0..m.rows() {
            let row: Vec<String> = m.row(r, m.cols()).iter().map(|d| d.to_string()).collect();
            let _ = writeln!(text, "  {}", row.join(" "));
        }
    }
    Ok(Output {
        json: serde_json::to_value(records)?,
        csv,
        text,
    })
}

fn points(
    g: &Global,
    count: u64,
    skip: u64,
    shift: bool,
    replication: u64,
    binary: Option<&Path>,
) -> irrsobol::Result<Output> {
    let end = skip
        .checked_add(count)
        .ok_or_else(|| Error::InvalidArgument("point range overflows".into()))?;
    let mut needed = 0usize;
    while (g.base as u64).checked_pow(needed as u32).is_some_and(|c| c < end) {
        needed += 1;
    }
    let mut gen = PointGenerator::new(sequence(g, g.dim, needed)?)?;
    if shift {
        gen = gen.apply_seeded_shift(g.seed, replication);
    }
    let pts: Vec<Vec<f64>> = (skip..end).map(|n| gen.point_at(n)).collect::<irrsobol::Result<_>>()?;
    if let Some(path) = binary {
        let file = fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        write_binary(io::BufWriter::new(file), &pts)?;
    }
    let mut csv = Vec::new();
    irrsobol::points::write_csv(&mut csv, &pts)?;
    let mut text = String::new();
    for (i, p) in pts.iter().enumerate() {
        let coords: Vec<String> = p.iter().map(|x| format!("{x:>12.10}")).collect();
        let _ = writeln!(text, "{:>8} {}", skip + i as u64, coords.join(" "));
    }
    Ok(Output {
        json: json!({"base": g.base, "dimension": g.dim, "skip": skip, "points": pts}),
        csv: String::from_utf8(csv).expect("ascii"),
        text,
    })
}

fn assess(
    g: &Global,
    family: &ProjectionFamily,
    m: MRange,
    options: ProfileOptions,
) -> irrsobol::Result<Output> {
    let seq = sequence(g, family.dimension(), m.hi)?;
    let report = t_profile(&seq, family, m.lo, m.hi, options)?;
    let mut csv = String::from("m,t_bar,T");
    let width = report.rows.iter().map(|r| r.frequency.len()).max().unwrap_or(0);
    for l in 0..width {
        let _ = write!(csv, ",n_{l}");
    }
    csv.push('\n');
    for r in &report.rows {
        let _ = write!(csv, "{},{},{}", r.m, r.mean, r.max);
        for l in 0..width {
            let _ = write!(csv, ",{}", r.frequency.get(l).copied().unwrap_or(0));
        }
        csv.push('\n');
    }
    let mut json = serde_json::to_value(&report)?;
    if let Some(obj) = json.as_object_mut() {
        obj.remove("alphas");
    }
    Ok(Output {
        json,
        csv,
        text: report.to_text(),
    })
}

fn propa(g: &Global, d: usize, k: usize) -> irrsobol::Result<Output> {
    let seq = sequence(g, d, 2 * k)?;
    let report = property_report(&seq, d, k)?;
    let csv = format!(
        "d,k,pi,m,pi_prime,m_prime\n{},{},{},{},{},{}\n",
        report.d, report.k, report.pi, report.m, report.pi_prime, report.m_prime
    );
    Ok(Output {
        json: serde_json::to_value(&report)?,
        csv,
        text: report.to_text(),
    })
}

fn search(cfg: &SearchConfig, method: SearchMethod) -> irrsobol::Result<Output> {
    let result = match method {
        SearchMethod::TwoStep => search_two_step(cfg)?,
        SearchMethod::OneRow => search_one_row(cfg)?,
    };
    let mut csv = String::from("dimension,code,degree,direction_numbers,pi,dq\n");
    let mut text = format!(
        "{:>6} {:>8} {:>4} {:>6} {:>12}  direction numbers\n",
        "dim", "code", "deg", "pi", "dq"
    );
    for c in &result.choices {
        let numbers: Vec<String> = c.direction_numbers.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            c.dimension,
            c.code,
            c.degree,
            numbers.join(" "),
            c.pi,
            c.dq
        );
        let _ = writeln!(
            text,
            "{:>6} {:>8} {:>4} {:>6} {:>12.4}  {}",
            c.dimension,
            c.code,
            c.degree,
            c.pi,
            c.dq,
            numbers.join(" ")
        );
    }
    Ok(Output {
        json: serde_json::to_value(result.table())?,
        csv,
        text,
    })
}

fn integrate(
    g: &Global,
    integrand: &dyn Integrand,
    cfg: &RqmcConfig,
    with_mc: bool,
) -> irrsobol::Result<Output> {
    let seq = Arc::new(sequence(g, integrand.dimension(), cfg.m_max)?);
    let mut reports = vec![rqmc_estimate(integrand, seq, cfg)?];
    if with_mc {
        reports.push(mc_estimate(integrand, g.base, cfg)?);
    }
    let mut csv = String::new();
    let mut text = String::new();
    for (i, r) in reports.iter().enumerate() {
        let body = r.to_csv();
        csv.push_str(if i == 0 { &body } else { body.split_once('\n').map_or("", |x| x.1) });
        let _ = writeln!(text, "{}", r.method);
        text.push_str(&r.to_text());
        if let Some(slope) = r.rmse_slope() {
            let _ = writeln!(text, "log2 rmse slope: {slope:.3}");
        }
    }
    Ok(Output {
        json: serde_json::to_value(&reports)?,
        csv,
        text,
    })
}
