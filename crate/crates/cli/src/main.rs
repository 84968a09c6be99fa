use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tracecode::evalcode::DEFAULT_SUBSET_BUDGET;
use tracecode::expand::{propagate, QuantumParams};
use tracecode::pipeline::{
    self, build, constructions_golden, era2_sweep, field_order, gv_check, table1_golden,
    table8_golden, trb_with_roots, verify_constructions, verify_el7, verify_sporadic,
    verify_table1_row, Budget, BuildRequest, LIGHT_FIELD_LIMIT,
};
use tracecode::qadic::t_from_b;
use tracecode::subfield::{coset_system, d_bound};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "tracecode",
    version,
    about = "Quantum codes from roots of trace-depending polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Include rows whose field exceeds 2^16 elements.
    #[arg(long, global = true)]
    heavy: bool,
    /// Exhaustive column-subset budget for distance certificates.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBSET_BUDGET)]
    budget: u64,
    /// Random subsets tried when the budget is exceeded.
    #[arg(long, global = true, default_value_t = 2000)]
    trials: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone)]
struct Triple {
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    /// `1 + q^t`, an alternative to `--t`.
    #[arg(long)]
    b: Option<u64>,
}

impl Triple {
    fn t(&self) -> Result<Option<u32>> {
        match (self.t, self.b, self.q, self.n) {
            (Some(t), _, _, _) => Ok(Some(t)),
            (None, Some(b), Some(q), Some(n)) => Ok(Some(t_from_b(q, n, b)?)),
            (None, Some(_), _, _) => bail!("--b needs --q and --n"),
            _ => Ok(None),
        }
    }

    fn matches(&self, q: u64, n: u32, t: u32) -> Result<bool> {
        Ok(self.q.is_none_or(|x| x == q)
            && self.n.is_none_or(|x| x == n)
            && self.t()?.is_none_or(|x| x == t))
    }

    fn require(&self) -> Result<(u64, u32, u32)> {
        let q = self.q.context("--q is required")?;
        let n = self.n.context("--n is required")?;
        let t = self.t()?.context("--t or --b is required")?;
        Ok((q, n, t))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Degrees and root counts of the shipped (q, n, t) triples.
    VerifyTable1 {
        #[command(flatten)]
        triple: Triple,
    },
    /// Nonzero power sums below the degree against the closed form.
    VerifyEl7 {
        #[command(flatten)]
        triple: Triple,
    },
    /// Rebuild the shipped construction tables, or sweep Δ(τ) for τ <= A(q,t).
    VerifyEra2 {
        #[arg(long)]
        certify: bool,
        /// Sweep every shipped triple (or the one given) with Gram and distance checks.
        #[arg(long)]
        sweep: bool,
        #[command(flatten)]
        triple: Triple,
    },
    /// Build one code and derive its quantum parameters.
    Build {
        #[command(flatten)]
        triple: Triple,
        #[arg(long)]
        tau: usize,
        #[arg(long)]
        nprime: Option<u32>,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        certify: bool,
        /// Also emit the propagated parameters.
        #[arg(long)]
        propagate: bool,
    },
    /// Cosets, the bound D and every admissible subfield-subcode.
    Subfield {
        #[command(flatten)]
        triple: Triple,
        #[arg(long)]
        nprime: u32,
        /// Only this τ.
        #[arg(long)]
        tau: Option<usize>,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// The sporadic binary records over GF(2^8).
    Sporadic,
    /// Compare parameters with the quantum Gilbert-Varshamov bound.
    Gv {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        length: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        d: u64,
    },
}

/// Flat view of a report row for csv and text output.
struct Flat {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

struct Report {
    command: &'static str,
    ok: bool,
    rows: serde_json::Value,
    flat: Flat,
}

impl Report {
    fn new<T: Serialize>(command: &'static str, ok: bool, rows: &[T], flat: Flat) -> Result<Self> {
        Ok(Report {
            command,
            ok,
            rows: serde_json::to_value(rows)?,
            flat,
        })
    }

    fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Json => {
                let v = json!({ "schema": SCHEMA, "command": self.command, "ok": self.ok, "rows": self.rows });
                serde_json::to_string_pretty(&v)? + "\n"
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.flat.header)?;
                for r in &self.flat.rows {
                    w.write_record(r)?;
                }
                String::from_utf8(w.into_inner()?)?
            }
            Format::Text => {
                let mut s = String::new();
                let widths: Vec<usize> = (0..self.flat.header.len())
                    .map(|i| {
                        self.flat
                            .rows
                            .iter()
                            .map(|r| r[i].chars().count())
                            .chain([self.flat.header[i].len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |cells: Vec<String>| -> String {
                    let padded: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:<w$}", w = *w))
                        .collect();
                    padded.join("  ").trim_end().to_string() + "\n"
                };
                s.push_str(&line(
                    self.flat.header.iter().map(|h| h.to_string()).collect(),
                ));
                for r in &self.flat.rows {
                    s.push_str(&line(r.clone()));
                }
                s.push_str(if self.ok {
                    "status: ok\n"
                } else {
                    "status: MISMATCH\n"
                });
                s
            }
        })
    }
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn budget(c: &Common) -> Budget {
    Budget {
        subset_budget: c.budget,
        trials: c.trials,
        seed: c.seed,
        ..Budget::default()
    }
}

fn cmd_verify_table1(triple: &Triple, c: &Common) -> Result<Report> {
    let b = budget(c);
    let mut rows = Vec::new();
    for r in table1_golden()? {
        if !triple.matches(r.q, r.n, r.t)?
            || (!c.heavy && field_order(r.q, r.n) > LIGHT_FIELD_LIMIT)
        {
            continue;
        }
        rows.push(r);
    }
    let checks = rows
        .iter()
        .map(|r| verify_table1_row(r, &b))
        .collect::<tracecode::Result<Vec<_>>>()?;
    let ok = checks.iter().all(|x| x.ok);
    let flat = Flat {
        header: vec![
            "q",
            "n",
            "t",
            "b",
            "m",
            "degree",
            "roots",
            "property_a",
            "ok",
        ],
        rows: checks
            .iter()
            .map(|x| {
                vec![
                    x.q.to_string(),
                    x.n.to_string(),
                    x.t.to_string(),
                    x.b.to_string(),
                    x.m_expected.to_string(),
                    x.degree.to_string(),
                    x.roots.to_string(),
                    yes(x.property_a),
                    yes(x.ok),
                ]
            })
            .collect(),
    };
    Report::new("verify-table1", ok, &checks, flat)
}

fn el7_triples(triple: &Triple, c: &Common) -> Result<Vec<(u64, u32, u32)>> {
    if let (Some(q), Some(n), Some(t)) = (triple.q, triple.n, triple.t()?) {
        return Ok(vec![(q, n, t)]);
    }
    let mut v: Vec<(u64, u32, u32)> = table1_golden()?.iter().map(|r| (r.q, r.n, r.t)).collect();
    v.push((2, 2, 2));
    v.sort_unstable();
    let mut out = Vec::new();
    for (q, n, t) in v {
        if triple.matches(q, n, t)? && (c.heavy || field_order(q, n) <= LIGHT_FIELD_LIMIT) {
            out.push((q, n, t));
        }
    }
    Ok(out)
}

fn cmd_verify_el7(triple: &Triple, c: &Common) -> Result<Report> {
    let b = budget(c);
    let checks = el7_triples(triple, c)?
        .into_iter()
        .map(|(q, n, t)| verify_el7(q, n, t, &b))
        .collect::<tracecode::Result<Vec<_>>>()?;
    let ok = checks.iter().all(|x| x.ok);
    let show = |v: &[pipeline::IndexSign]| {
        v.iter()
            .map(|x| format!("{}{}", x.sign, x.index))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let flat = Flat {
        header: vec!["q", "n", "t", "m", "predicted", "observed", "ok"],
        rows: checks
            .iter()
            .map(|x| {
                vec![
                    x.q.to_string(),
                    x.n.to_string(),
                    x.t.to_string(),
                    x.m.to_string(),
                    show(&x.predicted),
                    show(&x.observed),
                    yes(x.ok),
                ]
            })
            .collect(),
    };
    Report::new("verify-el7", ok, &checks, flat)
}

fn cmd_sweep(triple: &Triple, c: &Common) -> Result<Report> {
    let b = budget(c);
    let mut sweeps = Vec::new();
    for (q, n, t) in el7_triples(triple, c)? {
        if (q, n, t) == (2, 2, 1) || t == n {
            continue;
        }
        let poly = trb_with_roots(q, n, t, &b)?;
        sweeps.push(era2_sweep(&poly, true, &b)?);
    }
    let mut rows = Vec::new();
    let mut ok = true;
    for s in &sweeps {
        for p in &s.points {
            let refuted = p.dual_distance.as_ref().is_some_and(|d| d.is_refuted());
            let good = p.dim == p.tau + 1 && p.gram_zero && !refuted;
            ok &= good;
            let status = match &p.dual_distance {
                Some(tracecode::evalcode::DualDistanceCert::Certified { .. }) => "certified",
                Some(tracecode::evalcode::DualDistanceCert::SampledOnly { .. }) => "sampled",
                Some(tracecode::evalcode::DualDistanceCert::Refuted { .. }) => "refuted",
                None => "-",
            };
            rows.push(vec![
                format!("({},{},{})", s.q, s.n, s.t),
                p.tau.to_string(),
                p.dim.to_string(),
                yes(p.gram_zero),
                status.to_string(),
                p.params.as_ref().map_or("-".into(), QuantumParams::label),
                yes(good),
            ]);
        }
    }
    let flat = Flat {
        header: vec!["triple", "tau", "dim", "so", "distance", "params", "ok"],
        rows,
    };
    Report::new("verify-era2 --sweep", ok, &sweeps, flat)
}

fn cmd_verify_era2(certify: bool, c: &Common) -> Result<Report> {
    let b = budget(c);
    let checks = verify_constructions(&constructions_golden()?, certify, &b);
    let ok = checks.iter().all(|x| x.ok);
    let flat = Flat {
        header: vec!["family", "expected", "obtained", "exceeds_gv", "ok"],
        rows: checks
            .iter()
            .map(|x| {
                vec![
                    x.family.clone(),
                    x.expected.clone(),
                    x.obtained.clone().or(x.error.clone()).unwrap_or_default(),
                    x.build.as_ref().map_or("-".into(), |r| yes(r.exceeds_gv)),
                    yes(x.ok),
                ]
            })
            .collect(),
    };
    Report::new("verify-era2", ok, &checks, flat)
}

fn params_rows(params: &[QuantumParams]) -> Flat {
    Flat {
        header: vec!["params", "n", "k", "d", "q", "exceeds_gv"],
        rows: params
            .iter()
            .map(|p| {
                vec![
                    p.label(),
                    p.n.to_string(),
                    p.k.to_string(),
                    p.d.to_string(),
                    p.q.to_string(),
                    yes(tracecode::expand::exceeds_gv(p)),
                ]
            })
            .collect(),
    }
}

fn cmd_build(req: BuildRequest, with_propagation: bool, c: &Common) -> Result<Report> {
    let b = budget(c);
    let poly = trb_with_roots(req.q, req.n, req.t, &b)?;
    let rep = build(&req, &poly, &b)?;
    let mut params = vec![rep.params.clone()];
    if with_propagation {
        let mut frontier = propagate(&rep.params);
        params.extend(frontier.iter().cloned());
        // One more length extension, as for the binary records.
        if let Some(last) = frontier.pop() {
            let next = propagate(&last).pop().expect("length rule always applies");
            params.push(next);
        }
        params = params
            .into_iter()
            .map(tracecode::expand::annotate_gv)
            .collect();
    }
    let ok = rep.so.gram_zero && rep.within_bound;
    let flat = params_rows(&params);
    if with_propagation {
        Report::new("build", ok, &params, flat)
    } else {
        Report::new("build", ok, &[rep], flat)
    }
}

fn cmd_subfield(
    triple: &Triple,
    nprime: u32,
    tau: Option<usize>,
    r: u32,
    c: &Common,
) -> Result<Report> {
    let (q, n, t) = triple.require()?;
    let b = budget(c);
    let cs = coset_system(q, n, nprime)?;
    let bounds = d_bound(q, n, t, nprime)?;
    let poly = trb_with_roots(q, n, t, &b)?;
    let taus: Vec<usize> = match tau {
        Some(x) => vec![x],
        None => (0..cs.omega())
            .take_while(|&i| cs.min_reps[i] as i64 <= bounds.d)
            .collect(),
    };
    let reports = taus
        .iter()
        .map(|&tau| {
            build(
                &BuildRequest {
                    q,
                    n,
                    t,
                    tau,
                    n_prime: Some(nprime),
                    r,
                    certify: false,
                },
                &poly,
                &b,
            )
        })
        .collect::<tracecode::Result<Vec<_>>>()?;
    let ok = reports.iter().all(|x| x.so.gram_zero);
    let rows = reports
        .iter()
        .map(|x| {
            vec![
                x.tau.to_string(),
                cs.min_reps[x.tau].to_string(),
                x.dimension_bound.to_string(),
                x.classical_dim.to_string(),
                x.support_in_gamma.map_or("-".into(), yes),
                yes(x.so.gram_zero),
                x.params.label(),
                yes(x.exceeds_gv),
            ]
        })
        .collect();
    let flat = Flat {
        header: vec![
            "tau",
            "g_tau",
            "sum_sizes",
            "dim",
            "relation",
            "so",
            "params",
            "exceeds_gv",
        ],
        rows,
    };
    let mut rep = Report::new("subfield", ok, &reports, flat)?;
    rep.rows = json!({ "bounds": bounds, "min_reps": &cs.min_reps[..cs.min_reps.len().min(64)], "builds": rep.rows });
    Ok(rep)
}

fn cmd_sporadic(c: &Common) -> Result<Report> {
    let b = budget(c);
    let checks = verify_sporadic(&table8_golden()?, &b)?;
    let ok = checks.iter().all(|x| x.ok);
    let flat = Flat {
        header: vec![
            "row",
            "polynomial",
            "m",
            "m_found",
            "expected",
            "obtained",
            "alpha",
            "flags",
        ],
        rows: checks
            .iter()
            .map(|x| {
                vec![
                    x.row.to_string(),
                    x.polynomial.clone(),
                    x.m_claimed.to_string(),
                    x.m_over_primitives
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join("/"),
                    x.expected.clone(),
                    x.params.as_ref().map_or(
                        x.default_attempt.params.clone().unwrap_or("-".into()),
                        QuantumParams::label,
                    ),
                    x.chosen_alpha.map_or("none".into(), |k| format!("a^{k}")),
                    x.flags.join("; "),
                ]
            })
            .collect(),
    };
    Report::new("sporadic", ok, &checks, flat)
}

fn cmd_gv(q: u64, length: u64, k: u64, d: u64) -> Result<Report> {
    let p = QuantumParams::new(length, k, d, q, Vec::new())?;
    let g = gv_check(&p);
    let flat = Flat {
        header: vec!["params", "gv_distance", "exceeds"],
        rows: vec![vec![
            g.params.clone(),
            g.gv_distance.to_string(),
            yes(g.exceeds),
        ]],
    };
    Report::new("gv", g.exceeds, &[g], flat)
}

fn run(cli: Cli) -> Result<bool> {
    let c = &cli.common;
    if let Some(j) = c.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .context("configuring worker threads")?;
    }
    let report = match &cli.command {
        Command::VerifyTable1 { triple } => cmd_verify_table1(triple, c)?,
        Command::VerifyEl7 { triple } => cmd_verify_el7(triple, c)?,
        Command::VerifyEra2 {
            sweep: true,
            triple,
            ..
        } => cmd_sweep(triple, c)?,
        Command::VerifyEra2 { certify, .. } => cmd_verify_era2(*certify, c)?,
        Command::Build {
            triple,
            tau,
            nprime,
            r,
            certify,
            propagate,
        } => {
            let (q, n, t) = triple.require()?;
            let req = BuildRequest {
                q,
                n,
                t,
                tau: *tau,
                n_prime: *nprime,
                r: *r,
                certify: *certify,
            };
            cmd_build(req, *propagate, c)?
        }
        Command::Subfield {
            triple,
            nprime,
            tau,
            r,
        } => cmd_subfield(triple, *nprime, *tau, *r, c)?,
        Command::Sporadic => cmd_sporadic(c)?,
        Command::Gv { q, length, k, d } => cmd_gv(*q, *length, *k, *d)?,
    };
    let text = report.render(c.format)?;
    match &c.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(report.ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
