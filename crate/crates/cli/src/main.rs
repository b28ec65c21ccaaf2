use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use chrono::{DateTime, SecondsFormat, Utc};
use clap::{Parser, Subcommand, ValueEnum};

use polarizability_core::census::{census_records, report_from_records};
use polarizability_core::criteria::{
    artin_decision, cross_check, decide, family_reason, Reason, CSV_HEADER, FAMILY_ROWS,
};
use polarizability_core::intkernel::PrimePower;
use polarizability_core::tzmodel::tz_summary;
use polarizability_core::weilpoly::SurfaceClass;

const EXIT_NOT_PP: u8 = 3;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(
    name = "polarizability",
    version,
    about = "Principal polarizability of isogeny classes of abelian surfaces over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecideFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum CensusFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one class x^4 + a x^3 + b x^2 + a q x + q^2.
    Decide {
        #[arg(long, allow_hyphen_values = true)]
        q: i128,
        #[arg(long, allow_hyphen_values = true)]
        a: i128,
        #[arg(long, allow_hyphen_values = true)]
        b: i128,
        #[arg(long, value_enum, default_value = "json")]
        format: DecideFormat,
    },
    /// Decide every valid class over F_q.
    Census {
        #[arg(long)]
        q: i128,
        #[arg(long, value_enum, default_value = "json")]
        format: CensusFormat,
    },
    /// Recompute the reason column for each simple supersingular family at q.
    Table1 {
        #[arg(long)]
        q: i128,
    },
    /// Artin-symbol pipeline for the class (0, -q).
    Artin {
        #[arg(long)]
        q: i128,
    },
    /// Checks on the explicit degree-9 polarization of the twisted square.
    Tzmodel {
        #[arg(long)]
        q: i128,
    },
    /// Run every decision path on all classes with q <= qmax.
    Crosscheck {
        #[arg(long)]
        qmax: i128,
        /// Worker threads; POLARIZABILITY_JOBS takes precedence.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    match cmd {
        Command::Decide { q, a, b, format } => {
            let qp = match PrimePower::new(q) {
                Ok(qp) => qp,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(EXIT_INVALID));
                }
            };
            let r = decide(&SurfaceClass::new(qp, a, b));
            match format {
                DecideFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?,
                DecideFormat::Text => {
                    let show = |x: Option<&str>| x.unwrap_or("unknown").to_string();
                    writeln!(out, "class: {}", r.cls)?;
                    writeln!(out, "valid: {}", r.valid)?;
                    writeln!(
                        out,
                        "admissibility: {}",
                        show(r.admissibility.map(|x| x.as_str()))
                    )?;
                    writeln!(out, "newton: {}", show(r.newton.map(|x| x.as_str())))?;
                    writeln!(out, "shape: {}", show(r.shape.map(|x| x.as_str())))?;
                    let pp = r
                        .principally_polarizable
                        .map(|x| if x { "yes" } else { "no" });
                    writeln!(out, "principally polarizable: {}", show(pp))?;
                    writeln!(out, "path: {}", r.path.join(" -> "))?;
                    if let Some(reason) = &r.evidence.reason {
                        writeln!(out, "reason: {reason}")?;
                    }
                    if let Some(psi) = r.evidence.artin_symbol {
                        writeln!(out, "artin symbol: {psi}")?;
                    }
                }
            }
            Ok(match r.principally_polarizable {
                None => ExitCode::from(EXIT_INVALID),
                Some(true) => ExitCode::SUCCESS,
                Some(false) => ExitCode::from(EXIT_NOT_PP),
            })
        }
        Command::Census { q, format } => {
            let qp = PrimePower::new(q)?;
            let records = census_records(qp);
            match format {
                CensusFormat::Json => {
                    let mut report = report_from_records(qp, records);
                    report.generator.generated_at = Some(timestamp()?);
                    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
                }
                CensusFormat::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    w.write_record(CSV_HEADER)?;
                    for r in &records {
                        w.write_record(r.csv_row())?;
                    }
                    w.flush()?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Table1 { q } => {
            let qp = PrimePower::new(q)?;
            let mut failed = false;
            let mut any = false;
            for row in FAMILY_ROWS {
                for s in row.instances(qp) {
                    any = true;
                    let computed = family_reason(&s)?;
                    let printed = row.printed_reason();
                    let ok = computed == printed;
                    failed |= !ok;
                    let show =
                        |r: &Option<Reason>| r.as_ref().map_or("---".into(), Reason::to_string);
                    writeln!(
                        out,
                        "row {} {} [{}] a={} b={}: computed \"{}\", table \"{}\": {}",
                        row.number(),
                        row.shape_label(),
                        row.conditions(),
                        s.a(),
                        s.b(),
                        show(&computed),
                        show(&printed),
                        if ok { "PASS" } else { "FAIL" }
                    )?;
                }
            }
            if !any {
                writeln!(out, "no family of the table is instantiable at q = {q}")?;
            }
            Ok(if failed {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Artin { q } => {
            let qp = PrimePower::new(q)?;
            let o = artin_decision(&SurfaceClass::new(qp, 0, -q))?;
            writeln!(out, "class: {}", o.cls)?;
            writeln!(out, "K+ = {}", o.field)?;
            writeln!(out, "delta = {}", o.delta)?;
            writeln!(out, "ideal A = {}", o.ideal)?;
            writeln!(out, "A in K+(sqrt(delta)): {}", o.splitting.as_str())?;
            writeln!(out, "psi(A) = {}", o.psi)?;
            writeln!(
                out,
                "verdict: {}",
                if o.principally_polarizable {
                    "principally polarizable"
                } else {
                    "not principally polarizable"
                }
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tzmodel { q } => {
            let s = tz_summary(q)?;
            let flag = |b: bool| if b { "ok" } else { "FAILED" };
            writeln!(out, "q = {}, S = maximal order of Q(sqrt({}))", s.q, s.s_d0)?;
            writeln!(out, "zeta^3 = I: {}", flag(s.zeta_cubed_is_identity))?;
            writeln!(out, "zeta^2 + zeta + I = 0: {}", flag(s.zeta_cyclotomic))?;
            writeln!(
                out,
                "commutant of zeta in M_2(Z): rank {}",
                s.integer_commutant_rank
            )?;
            writeln!(
                out,
                "commutant of zeta in M_2(S): rank {}",
                s.commutant_rank
            )?;
            writeln!(
                out,
                "commutant = S[omega]: {}",
                flag(s.commutant_is_s_omega)
            )?;
            writeln!(out, "structure constants: {}", flag(s.structure_constants))?;
            writeln!(
                out,
                "b fixed by dagger: {}",
                flag(s.polarization_dagger_fixed)
            )?;
            writeln!(
                out,
                "b positive definite: {}",
                flag(s.polarization_positive)
            )?;
            writeln!(out, "deg b = {}", s.polarization_degree)?;
            writeln!(out, "ker b: order {}", s.kernel.order)?;
            writeln!(out, "ker b cyclic over O: {}", flag(s.kernel.cyclic_over_o))?;
            writeln!(
                out,
                "Ann(ker b)^2 = 3 O: {}",
                flag(s.kernel.annihilator_square_is_ell_o)
            )?;
            writeln!(
                out,
                "omega trivial on ker b: {}",
                flag(s.kernel.omega_acts_trivially)
            )?;
            writeln!(out, "{}", if s.all_pass() { "PASS" } else { "FAIL" })?;
            Ok(if s.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Crosscheck { qmax, jobs } => {
            let jobs = match std::env::var("POLARIZABILITY_JOBS") {
                Ok(v) => v
                    .parse()
                    .context("POLARIZABILITY_JOBS must be a positive integer")?,
                Err(_) => jobs
                    .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            };
            let start = std::time::Instant::now();
            let report = cross_check(qmax, jobs)?;
            eprintln!("jobs = {jobs}, elapsed {:.2?}", start.elapsed());
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(if report.is_clean() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

/// `SOURCE_DATE_EPOCH` when set, so reproducible builds stay byte-identical.
fn timestamp() -> Result<String> {
    let t: DateTime<Utc> = match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(s) => {
            let secs: i64 = s.trim().parse().context("SOURCE_DATE_EPOCH")?;
            DateTime::from_timestamp(secs, 0).context("SOURCE_DATE_EPOCH out of range")?
        }
        Err(_) => Utc::now(),
    };
    Ok(t.to_rfc3339_opts(SecondsFormat::Secs, true))
}
