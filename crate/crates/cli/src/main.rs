mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use apalg::aplus::{extend, is_ap_plus, negative_spectrum_decay, HalfPlanePoint};
use apalg::bohr::{fb_exact, fb_numeric};
use apalg::corona::{
    approximation_resistance_check, bezout_with, example_fundamental, example_general, invertible,
    reduction_zero_witness, stable_rank_reference, unimodular, unimodular_with_cofactors, WitnessOptions,
};
use apalg::expr::parse_laurent;
use apalg::freqmod::{extract_basis, freq_parse, membership_with, Generator, SemigroupKind, SemigroupSpec};
use apalg::torus::{kronecker_orbit_sample, torus_max_abs, torus_min_abs, transfer, transfer_with_frame};
use apalg::workspace::Workspace;
use apalg::{Frequency, TrigPoly};

use output::{coeff_json, complex_json, emit, extremum_json, freq_json};

#[derive(Parser)]
#[command(name = "apalg", version, about = "Almost periodic trigonometric polynomials: exact algebra and certified torus computations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Workspace file; created on first write.
    #[arg(long, global = true)]
    ws: Option<PathBuf>,
    /// Extra generator `name=value` for this run only (repeatable).
    #[arg(long = "gen", id = "extra_generators", global = true, value_name = "NAME=VALUE")]
    generators: Vec<String>,
    /// Torus grid density per axis.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Golden-section polish rounds.
    #[arg(long, global = true)]
    refine: Option<usize>,
    /// Tolerance for witness residuals.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Print JSON instead of `key: value` lines.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Append generators `name=value` to the workspace.
    Declare {
        #[arg(required = true, value_name = "NAME=VALUE")]
        entries: Vec<String>,
        /// Mark the new generators as not known to be independent.
        #[arg(long)]
        dependent: bool,
    },
    /// Store a named polynomial in the workspace.
    Def { name: String, expr: String },
    /// List the terms of a polynomial.
    Spectrum { expr: String },
    /// Fourier–Bohr coefficient, exact or over `[-T, T]`.
    Fb {
        expr: String,
        #[arg(long)]
        freq: String,
        #[arg(long = "half-length")]
        half_length: Option<f64>,
    },
    /// Rational basis of a list of frequencies.
    Basis {
        #[arg(required = true)]
        freqs: Vec<String>,
    },
    /// Rewrite a polynomial as a Laurent polynomial on a torus.
    Transfer {
        expr: String,
        /// Frequencies to place first in the basis (repeatable).
        #[arg(long)]
        frame: Vec<String>,
    },
    /// Certified infimum of |p| over the real line.
    Inf { expr: String },
    /// Certified supremum of |p| over the real line.
    Sup { expr: String },
    /// Invertibility of one polynomial.
    Invertible { expr: String },
    /// Unimodularity of a tuple.
    Unimodular {
        #[arg(required = true)]
        exprs: Vec<String>,
        /// Known cofactors B_j with Σ B_j F_j constant (one per entry).
        #[arg(long)]
        cofactor: Vec<String>,
    },
    /// Bézout cofactors of a unimodular tuple, checked on the sample grid.
    BezoutCheck {
        #[arg(required = true)]
        exprs: Vec<String>,
        #[arg(long)]
        cofactor: Vec<String>,
    },
    /// Semigroup membership of a frequency.
    Member {
        freq: String,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Semigroup generators for `nspan` and `zspan` (repeatable).
        #[arg(long = "by")]
        by: Vec<String>,
    },
    /// Is the spectrum nonnegative?
    AplusCheck { expr: String },
    /// Holomorphic extension at x + iy.
    Extend {
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// Mean values against a negative frequency over growing windows.
    Decay {
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        freq: String,
        #[arg(long = "half-length", required = true)]
        half_lengths: Vec<f64>,
    },
    /// The non-reducible example tuples.
    #[command(subcommand)]
    Example(Example),
    /// Common zero of f_j + h_j g for the fundamental example.
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// Perturbation h_j in z1..z{4N}, one per j.
        #[arg(long, required = true, allow_hyphen_values = true)]
        h: Vec<String>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Approximation resistance of (F_1, …, F_N).
    Resist {
        /// The 4N independent frequencies (repeatable).
        #[arg(long, required = true)]
        freq: Vec<String>,
        /// The approximating tuple H, one expression per j.
        #[arg(long, required = true, allow_hyphen_values = true)]
        h: Vec<String>,
    },
    /// Reference Bass and topological stable ranks.
    Ranks {
        #[arg(long)]
        n: u64,
    },
    /// Cell occupancy of a sampled Kronecker orbit.
    Orbit {
        #[arg(required = true)]
        freqs: Vec<String>,
        #[arg(long, default_value_t = 1_000_000)]
        count: u64,
        #[arg(long, default_value_t = 1e-2)]
        dt: f64,
    },
}

#[derive(Subcommand)]
enum Example {
    /// (f_1, …, f_N, g) on T^{4N}.
    Fundamental {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    /// F_j = e(λ_{2j-1}) + e(λ_{2j}) - 1.
    General {
        #[arg(required = true)]
        freqs: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Nspan,
    Zspan,
    Nonneg,
    All,
}

/// Misuse that clap cannot see, reported with the usage exit code.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn parse_generators(specs: &[String], independent: bool) -> anyhow::Result<Vec<Generator>> {
    specs
        .iter()
        .map(|s| match s.split_once('=') {
            Some((n, v)) => Ok(Generator { name: n.trim().into(), value: v.trim().into(), independent }),
            None => Err(Usage(format!("expected NAME=VALUE, got `{s}`")).into()),
        })
        .collect()
}

struct Session {
    ws: Workspace,
    path: Option<PathBuf>,
}

impl Session {
    fn open(g: &Global) -> anyhow::Result<Self> {
        let mut ws = match &g.ws {
            Some(p) if p.exists() => Workspace::load(p)?,
            _ => Workspace::new(),
        };
        if !g.generators.is_empty() {
            ws.declare(parse_generators(&g.generators, true)?)?;
        }
        if let Some(grid) = g.grid {
            ws.settings.grid = Some(grid);
        }
        if let Some(r) = g.refine {
            ws.settings.refinements = r;
        }
        if let Some(t) = g.tol {
            ws.settings.tol = t;
        }
        ws.settings.validate()?;
        Ok(Session { ws, path: g.ws.clone() })
    }

    fn save(&self) -> anyhow::Result<()> {
        match &self.path {
            Some(p) => Ok(self.ws.save(p)?),
            None => Err(Usage("this command needs --ws <path>".into()).into()),
        }
    }

    fn poly(&self, text: &str) -> anyhow::Result<TrigPoly> {
        self.ws.parse(text).with_context(|| format!("in `{text}`"))
    }

    fn polys(&self, texts: &[String]) -> anyhow::Result<Vec<TrigPoly>> {
        texts.iter().map(|t| self.poly(t)).collect()
    }

    fn freq(&self, text: &str) -> anyhow::Result<Frequency> {
        freq_parse(text, self.ws.table()).with_context(|| format!("in frequency `{text}`"))
    }

    fn freqs(&self, texts: &[String]) -> anyhow::Result<Vec<Frequency>> {
        texts.iter().map(|t| self.freq(t)).collect()
    }

    fn render(&self, f: &Frequency) -> String {
        self.ws.table().render(f)
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut s = Session::open(&cli.global)?;
    let settings = s.ws.settings.search();
    let out: Value = match cli.command {
        Command::Declare { entries, dependent } => {
            if s.path.is_none() {
                bail!(Usage("declare needs --ws <path>".into()));
            }
            s.ws.declare(parse_generators(&entries, !dependent)?)?;
            s.save()?;
            json!({ "generators": s.ws.table().entries() })
        }
        Command::Def { name, expr } => {
            if s.path.is_none() {
                bail!(Usage("def needs --ws <path>".into()));
            }
            let p = s.poly(&expr)?;
            s.ws.define(&name, p.clone())?;
            s.save()?;
            json!({ "name": name, "poly": p.render() })
        }
        Command::Spectrum { expr } => {
            let p = s.poly(&expr)?;
            let terms: Vec<Value> = p
                .terms()
                .map(|(f, a)| json!({ "freq": freq_json(s.ws.table(), f), "coeff": coeff_json(a) }))
                .collect();
            json!({ "poly": p.render(), "terms": terms })
        }
        Command::Fb { expr, freq, half_length } => {
            let p = s.poly(&expr)?;
            let f = s.freq(&freq)?;
            let mut v = json!({ "freq": freq_json(s.ws.table(), &f), "exact": coeff_json(&fb_exact(&p, &f)) });
            if let Some(t) = half_length {
                let est = fb_numeric(&p, &f, t)?;
                v["numeric"] = json!({
                    "half_length": t,
                    "value": complex_json(est.value),
                    "error_bound": est.error_bound,
                });
            }
            v
        }
        Command::Basis { freqs } => {
            let fs = s.freqs(&freqs)?;
            let b = extract_basis(&fs);
            json!({
                "basis": b.basis.iter().map(|f| s.render(f)).collect::<Vec<_>>(),
                "basis_indices": b.basis_indices,
                "scale": b.scale.to_string(),
                "rewrite": b.rewrite.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "scaled_basis": b.scaled(s.ws.table()).iter().map(|f| s.render(f)).collect::<Vec<_>>(),
            })
        }
        Command::Transfer { expr, frame } => {
            let p = s.poly(&expr)?;
            let frame = s.freqs(&frame)?;
            let r = if frame.is_empty() { transfer(&p)? } else { transfer_with_frame(&p, &frame)? };
            json!({
                "q": r.q.render(),
                "dim": r.q.dim(),
                "scale": r.basis.scale.to_string(),
                "variables": r.scaled_freqs.iter().map(|f| s.render(f)).collect::<Vec<_>>(),
            })
        }
        Command::Inf { expr } => {
            let q = transfer(&s.poly(&expr)?)?.q;
            let r = torus_min_abs(&q, settings.grid_for(q.dim()), settings.refinements)?;
            let certified = r.certified_bound > 0.0;
            extremum_json(&r, certified)
        }
        Command::Sup { expr } => {
            let q = transfer(&s.poly(&expr)?)?.q;
            let r = torus_max_abs(&q, settings.grid_for(q.dim()), settings.refinements)?;
            extremum_json(&r, true)
        }
        Command::Invertible { expr } => serde_json::to_value(invertible(&s.poly(&expr)?, &settings)?)?,
        Command::Unimodular { exprs, cofactor } => {
            let fs = s.polys(&exprs)?;
            let report = unimodular_report(&s, &fs, &cofactor, &settings)?;
            serde_json::to_value(report)?
        }
        Command::BezoutCheck { exprs, cofactor } => {
            let fs = s.polys(&exprs)?;
            let report = unimodular_report(&s, &fs, &cofactor, &settings)?;
            let st = &s.ws.settings;
            let sol = bezout_with(&fs, &report, st.sample_count, st.sample_span)?;
            json!({
                "delta": sol.delta,
                "certified_delta": report.certified_delta,
                "residual_bound": sol.residual_bound,
                "samples": { "count": st.sample_count, "span": st.sample_span },
                "solvers_at_zero": sol.solvers_at(0.0).into_iter().map(complex_json).collect::<Vec<_>>(),
            })
        }
        Command::Member { freq, kind, by } => {
            let f = s.freq(&freq)?;
            let spec = match kind {
                Kind::Nonneg => SemigroupSpec::nonneg_reals(),
                Kind::All => SemigroupSpec::all_reals(),
                Kind::Nspan => SemigroupSpec::new(SemigroupKind::NSpan, s.freqs(&by)?)?,
                Kind::Zspan => SemigroupSpec::new(SemigroupKind::ZSpan, s.freqs(&by)?)?,
            };
            let verdict = membership_with(&f, &spec, &s.ws.settings.membership());
            json!({ "freq": freq_json(s.ws.table(), &f), "verdict": format!("{verdict:?}") })
        }
        Command::AplusCheck { expr } => {
            json!({ "verdict": format!("{:?}", is_ap_plus(&s.poly(&expr)?)) })
        }
        Command::Extend { expr, x, y } => {
            let p = s.poly(&expr)?;
            let v = extend(&p, HalfPlanePoint::new(x, y)?)?;
            json!({ "x": x, "y": y, "value": complex_json(v), "wiener_norm": p.wiener_norm() })
        }
        Command::Decay { expr, freq, half_lengths } => {
            let p = s.poly(&expr)?;
            let f = s.freq(&freq)?;
            let est = negative_spectrum_decay(&p, &f, &half_lengths)?;
            let rows: Vec<Value> = est
                .iter()
                .map(|e| {
                    json!({
                        "half_length": e.half_length,
                        "value": complex_json(e.value),
                        "modulus": e.value.norm(),
                        "error_bound": e.error_bound,
                    })
                })
                .collect();
            json!({ "freq": freq_json(s.ws.table(), &f), "estimates": rows })
        }
        Command::Example(Example::Fundamental { n, s: power }) => {
            let ex = example_fundamental(n, power)?;
            json!({
                "n": n,
                "s": power,
                "fs": ex.fs.iter().map(|f| f.render()).collect::<Vec<_>>(),
                "g": ex.g.render(),
                "g_terms": ex.g.len(),
                "identity_holds": ex.identity_holds(),
            })
        }
        Command::Example(Example::General { freqs }) => {
            let fs = example_general(s.ws.table(), &s.freqs(&freqs)?)?;
            json!({ "fs": fs.iter().map(|f| f.render()).collect::<Vec<_>>() })
        }
        Command::Witness { n, s: power, h, seed } => {
            let hs = h.iter().map(|t| parse_laurent(t, 4 * n).with_context(|| format!("in `{t}`"))).collect::<anyhow::Result<Vec<_>>>()?;
            let opts = WitnessOptions { tol: s.ws.settings.tol, seed, ..WitnessOptions::default() };
            serde_json::to_value(reduction_zero_witness(n, power, &hs, &opts)?)?
        }
        Command::Resist { freq, h } => {
            let lambdas = s.freqs(&freq)?;
            let hs = s.polys(&h)?;
            serde_json::to_value(approximation_resistance_check(&lambdas, &hs, &settings)?)?
        }
        Command::Ranks { n } => serde_json::to_value(stable_rank_reference(n)?)?,
        Command::Orbit { freqs, count, dt } => {
            serde_json::to_value(kronecker_orbit_sample(&s.freqs(&freqs)?, count, dt)?)?
        }
    };
    emit(&out, cli.global.json)?;
    Ok(())
}

fn unimodular_report(
    s: &Session,
    fs: &[TrigPoly],
    cofactors: &[String],
    settings: &apalg::corona::SearchSettings,
) -> anyhow::Result<apalg::corona::InvertibilityReport> {
    if cofactors.is_empty() {
        return Ok(unimodular(fs, settings)?);
    }
    if cofactors.len() != fs.len() {
        bail!(Usage(format!("{} cofactors for {} entries", cofactors.len(), fs.len())));
    }
    Ok(unimodular_with_cofactors(fs, &s.polys(cofactors)?, settings)?)
}
