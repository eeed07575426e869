use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use qlattice::euclid::Representation;
use qlattice::exec::Strategy;
use qlattice::explorer::{top_class_members, ExternalGraph};
use qlattice::fix::{self, rat_string, Direction, GramKind, Variant};
use qlattice::grassmann::{Grassmann, GrassmannGraph};
use qlattice::ratmat::RatMatrix;
use qlattice::suite::{self, VerifyConfig};
use qlattice::{Error, QParams};
use serde_json::{json, Value};

use crate::{Cli, Command, DirectionArg, Format, TableKind, VariantArg};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InexactDivision(_) | Error::NotInvertible => 1,
            _ => 2,
        };
        CliError { code, msg: e.to_string() }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError { code: 2, msg: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub struct Output {
    w: Box<dyn Write>,
}

impl Output {
    pub fn open(path: Option<&Path>) -> io::Result<Self> {
        let w: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Output { w })
    }

    pub fn finish(&mut self) -> CliResult<()> {
        self.w.flush()?;
        Ok(())
    }
}

impl Write for Output {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.w.write(buf)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.w.flush()
    }
}

/// Runs the selected command. `Ok(false)` means a check failed.
pub fn run(cli: &Cli, out: &mut Output) -> CliResult<bool> {
    let (q, n, k) = cli.qnk();
    let params = QParams::new(q, n, k)?;
    let strategy = if cli.sequential { Strategy::Sequential } else { Strategy::Parallel };
    match &cli.command {
        Command::Verify => verify(cli, params, strategy, out),
        Command::Gram { kind, i, variant, direction } => {
            gram(cli.format, &params, *kind, *i, (*variant).into(), (*direction).into(), out)
        }
        Command::Recover { i } => recover(cli, params, *i, out),
        Command::ExportGraph => export_graph(cli, params, strategy, out),
        Command::Explore { graph, pair, i, roots } => {
            explore(cli, &params, graph, pair.as_deref(), *i, *roots, strategy, out)
        }
    }
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Full => Variant::Full,
            VariantArg::Bar => Variant::Bar,
            VariantArg::Check => Variant::Check,
        }
    }
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::GeoToComb => Direction::GeoToComb,
            DirectionArg::CombToGeo => Direction::CombToGeo,
        }
    }
}

fn write_json(out: &mut Output, v: &Value) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| CliError { code: 2, msg: e.to_string() })?;
    writeln!(out)?;
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(out: &mut Output, fields: &[String]) -> io::Result<()> {
    let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
    writeln!(out, "{}", line.join(","))
}

fn verify(cli: &Cli, params: QParams, strategy: Strategy, out: &mut Output) -> CliResult<bool> {
    let cfg = VerifyConfig { seed: cli.seed, sample: cli.sample, cap: cli.cap, strategy };
    let report = suite::run_verify(params, &cfg)?;
    match cli.format {
        Format::Json => write_json(out, &serde_json::to_value(&report).expect("report serializes"))?,
        Format::Text => write!(out, "{}", suite::render_text(&report))?,
        Format::Csv => {
            csv_line(out, &["check".into(), "passed".into(), "millis".into(), "detail".into()])?;
            for c in &report.checks {
                csv_line(out, &[c.name.clone(), c.passed.to_string(), c.millis.to_string(), c.detail.clone()])?;
            }
        }
    }
    Ok(report.all_passed)
}

fn rat_pair_strings(v: &Value) -> String {
    let num = v[0].as_str().unwrap_or("?");
    let den = v[1].as_str().unwrap_or("?");
    if den == "1" {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}

fn matrix_value(m: &RatMatrix) -> Value {
    Value::Array(
        m.entries()
            .iter()
            .map(|v| json!([v.numer().to_string(), v.denom().to_string()]))
            .collect(),
    )
}

fn table_value(
    p: &QParams,
    kind: TableKind,
    i: usize,
    variant: Variant,
    direction: Direction,
) -> qlattice::Result<Value> {
    let gram = |k: GramKind| fix::gram_table(k, p, i).map(|t| t.to_json(p));
    match kind {
        TableKind::Geometric => gram(GramKind::Geometric),
        TableKind::Mixed => gram(GramKind::Mixed),
        TableKind::Combinatorial => gram(GramKind::Combinatorial),
        TableKind::Transition => Ok(fix::transition(direction, variant, p, i)?.to_json(p)),
        TableKind::MInverse => {
            let m = fix::m_inverse(p, i)?;
            let labels = Variant::Full.geometric_labels();
            Ok(json!({
                "params": {"q": p.q, "n": p.n, "k": p.k},
                "i": i,
                "kind": "m-inverse",
                "labels": labels,
                "row_labels": labels,
                "shape": [m.rows(), m.cols()],
                "entries": matrix_value(&m),
            }))
        }
    }
}

fn gram(
    format: Format,
    p: &QParams,
    kind: TableKind,
    i: usize,
    variant: Variant,
    direction: Direction,
    out: &mut Output,
) -> CliResult<bool> {
    let v = table_value(p, kind, i, variant, direction)?;
    if format == Format::Json {
        write_json(out, &v)?;
        return Ok(true);
    }
    let labels: Vec<String> = v["labels"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|l| l.as_str().unwrap_or_default().to_string())
        .collect();
    let row_labels: Vec<String> = v["row_labels"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|l| l.as_str().unwrap_or_default().to_string())
        .collect();
    let cols = labels.len();
    let cells: Vec<String> = v["entries"]
        .as_array()
        .into_iter()
        .flatten()
        .map(rat_pair_strings)
        .collect();
    let mut meta = format!("kind={} q={} n={} k={} i={}", v["kind"].as_str().unwrap_or(""), p.q, p.n, p.k, i);
    if !v["det"].is_null() {
        meta.push_str(&format!(" det={}", rat_pair_strings(&v["det"])));
    }
    match format {
        Format::Csv => {
            writeln!(out, "# {meta}")?;
            let mut head = vec![String::new()];
            head.extend(labels.iter().cloned());
            csv_line(out, &head)?;
            for (r, rl) in row_labels.iter().enumerate() {
                let mut row = vec![rl.clone()];
                row.extend(cells[r * cols..(r + 1) * cols].iter().cloned());
                csv_line(out, &row)?;
            }
        }
        _ => {
            writeln!(out, "{meta}")?;
            let width = cells
                .iter()
                .chain(labels.iter())
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(1);
            let lw = row_labels.iter().map(|s| s.chars().count()).max().unwrap_or(1);
            write!(out, "{:lw$}", "")?;
            for l in &labels {
                write!(out, "  {l:>width$}")?;
            }
            writeln!(out)?;
            for (r, rl) in row_labels.iter().enumerate() {
                write!(out, "{rl:lw$}")?;
                for c in &cells[r * cols..(r + 1) * cols] {
                    write!(out, "  {c:>width$}")?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(true)
}

fn recover(cli: &Cli, params: QParams, i: usize, out: &mut Output) -> CliResult<bool> {
    params.check_mid_distance(i)?;
    let g = Grassmann::new(params)?;
    let rep = Representation::for_grassmann(&g);
    let (x, y) = g.witness_pair(i, cli.seed)?;
    let ctx = g.pair_context(&x, &y)?;
    let meet_hat = rep.hat(&ctx.meet_xy);
    let join_hat = rep.hat(&ctx.join_xy);
    let p = &g.params;

    let mut variants = Vec::new();
    let mut all_ok = true;
    for variant in Variant::ALL {
        let rec = fix::recover_meet_join(&g, &rep, &x, &y, variant)?;
        let meet_ok = rec.meet == meet_hat;
        let join_ok = rec.join == join_hat;
        all_ok &= meet_ok && join_ok;
        variants.push(json!({
            "variant": variant.name(),
            "basis": variant.combinatorial_labels(),
            "meet_coeffs": rec.meet_coeffs.iter().map(rat_string).collect::<Vec<_>>(),
            "join_coeffs": rec.join_coeffs.iter().map(rat_string).collect::<Vec<_>>(),
            "meet_equal": meet_ok,
            "join_equal": join_ok,
        }));
    }
    let vector = |v: &qlattice::RepVector| {
        json!({
            "coords": v.coords(),
            "scale": rep.scale(),
            "note": "coords are sqrt(scale) times the vector",
        })
    };
    let record = json!({
        "params": {"q": p.q, "n": p.n, "k": p.k},
        "i": i,
        "seed": cli.seed,
        "x": x.to_text(),
        "y": y.to_text(),
        "meet": ctx.meet_xy.to_text(),
        "join": ctx.join_xy.to_text(),
        "variants": variants,
        "meet_hat": vector(&meet_hat),
        "join_hat": vector(&join_hat),
        "all_equal": all_ok,
    });

    match cli.format {
        Format::Json => write_json(out, &record)?,
        Format::Csv => {
            csv_line(out, &["variant".into(), "target".into(), "label".into(), "coefficient".into()])?;
            for v in &variants {
                let name = v["variant"].as_str().unwrap_or_default().to_string();
                let labels = v["basis"].as_array().cloned().unwrap_or_default();
                for target in ["meet", "join"] {
                    let coeffs = v[format!("{target}_coeffs")].as_array().cloned().unwrap_or_default();
                    for (l, c) in labels.iter().zip(&coeffs) {
                        csv_line(out, &[
                            name.clone(),
                            target.into(),
                            l.as_str().unwrap_or_default().into(),
                            c.as_str().unwrap_or_default().into(),
                        ])?;
                    }
                    csv_line(out, &[
                        name.clone(),
                        target.into(),
                        "equal".into(),
                        v[format!("{target}_equal")].to_string(),
                    ])?;
                }
            }
        }
        Format::Text => {
            writeln!(out, "recover q={} n={} k={} i={} seed={}", p.q, p.n, p.k, i, cli.seed)?;
            writeln!(out, "x = {}", x.to_text())?;
            writeln!(out, "y = {}", y.to_text())?;
            for v in &variants {
                let labels: Vec<&str> = v["basis"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .filter_map(|l| l.as_str())
                    .collect();
                writeln!(out, "{}:", v["variant"].as_str().unwrap_or_default())?;
                for target in ["meet", "join"] {
                    let coeffs: Vec<&str> = v[format!("{target}_coeffs")]
                        .as_array()
                        .into_iter()
                        .flatten()
                        .filter_map(|c| c.as_str())
                        .collect();
                    let terms: Vec<String> =
                        coeffs.iter().zip(&labels).map(|(c, l)| format!("({c}) {l}")).collect();
                    let ok = v[format!("{target}_equal")].as_bool() == Some(true);
                    writeln!(out, "  {target} = {}  [{}]", terms.join(" + "), if ok { "OK" } else { "MISMATCH" })?;
                }
            }
        }
    }
    Ok(all_ok)
}

fn export_graph(cli: &Cli, params: QParams, strategy: Strategy, out: &mut Output) -> CliResult<bool> {
    let g = Grassmann::new(params.clone())?;
    let graph = GrassmannGraph::build(&g, cli.cap, strategy)?;
    let ext = ExternalGraph::new(params, graph.into_adjacency());
    ext.write_text(out)?;
    Ok(true)
}

fn parse_pair(s: &str) -> CliResult<(u32, u32)> {
    let bad = || CliError { code: 2, msg: format!("--pair expects X,Y, got {s:?}") };
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

#[allow(clippy::too_many_arguments)]
fn explore(
    cli: &Cli,
    params: &QParams,
    path: &Path,
    pair: Option<&str>,
    i: Option<usize>,
    roots: usize,
    strategy: Strategy,
    out: &mut Output,
) -> CliResult<bool> {
    let ext = ExternalGraph::load(path)?;
    if cli.params_given() && ext.params != *params {
        return Err(CliError {
            code: 2,
            msg: format!(
                "graph header claims q={} n={} k={}, flags say q={} n={} k={}",
                ext.params.q, ext.params.n, ext.params.k, params.q, params.n, params.k
            ),
        });
    }
    let validation = ext.validate(roots, cli.seed, strategy)?;
    let nv = ext.vertex_count() as u32;
    let (x, y) = match (pair, i) {
        (Some(s), _) => {
            let (x, y) = parse_pair(s)?;
            if x >= nv || y >= nv {
                return Err(CliError { code: 2, msg: format!("pair {x},{y} out of range for {nv} vertices") });
            }
            (x, y)
        }
        (None, i) => ext.pair_at_distance(i.unwrap_or(2))?,
    };
    let p1 = ext.problem1(x, y, strategy)?;
    let p2 = ext.problem2(&p1.values)?;
    let top = top_class_members(&p1);
    let p3 = if top.is_empty() { None } else { Some(ext.problem3(&top, p1.i, strategy)?) };

    let p = &ext.params;
    let report = json!({
        "params": {"q": p.q, "n": p.n, "k": p.k},
        "validation": validation,
        "pair": [x, y],
        "i": p1.i,
        "problem1": p1,
        "problem2": p2,
        "problem3": p3,
    });
    match cli.format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            csv_line(out, &["section".into(), "key".into(), "value".into()])?;
            let mut row = |s: &str, k: String, v: String| csv_line(out, &[s.into(), k, v]);
            row("pair", "x".into(), x.to_string())?;
            row("pair", "y".into(), y.to_string())?;
            row("pair", "i".into(), p1.i.to_string())?;
            for a in &p1.allowed {
                row("allowed", "value".into(), a.to_string())?;
            }
            for (v, c) in &p1.spectrum {
                row("spectrum", v.clone(), c.to_string())?;
            }
            row("problem1", "all_allowed".into(), p1.all_allowed.to_string())?;
            for c in &p2.classes {
                row("class", c.value.clone(), c.size.to_string())?;
            }
            row("problem2", "equitable".into(), p2.equitable.to_string())?;
            match &p3 {
                Some(r) => {
                    row("problem3", "set_size".into(), r.set_size.to_string())?;
                    row("problem3", "geodesically_closed".into(), r.geodesically_closed.to_string())?;
                    row("problem3", "diameter".into(), r.diameter.to_string())?;
                    row("problem3", "passes".into(), r.passes.to_string())?;
                }
                None => row("problem3", "set_size".into(), "0".into())?,
            }
        }
        Format::Text => {
            writeln!(out, "explore q={} n={} k={}: {} vertices, degree {}", p.q, p.n, p.k, validation.vertex_count, validation.degree)?;
            writeln!(out, "validation: ok (a_1 on {} edges, roots {:?})", validation.edges_checked_a1, validation.sampled_roots)?;
            writeln!(out, "pair ({x}, {y}) at distance {}", p1.i)?;
            writeln!(out, "allowed values: {:?}", p1.allowed)?;
            let spec: Vec<String> = p1.spectrum.iter().map(|(v, c)| format!("{v} x{c}")).collect();
            writeln!(out, "observed values: {}", spec.join(", "))?;
            writeln!(out, "problem 1 (values allowed): {}", p1.all_allowed)?;
            let sizes: Vec<String> = p2.classes.iter().map(|c| format!("{}:{}", c.value, c.size)).collect();
            writeln!(out, "partner classes: {}", sizes.join(", "))?;
            writeln!(out, "problem 2 (equitable): {}", p2.equitable)?;
            match &p3 {
                Some(r) => writeln!(
                    out,
                    "problem 3 (top class of {} closed, diameter {} expected {}): {}",
                    r.set_size, r.diameter, r.expected_diameter, r.passes
                )?,
                None => writeln!(out, "problem 3: top class is empty")?,
            }
        }
    }
    Ok(true)
}
