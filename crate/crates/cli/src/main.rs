mod table;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use perigee::construction::{
    build_plan, compensated_envelope, enumerate_oracle, infinite_certificate, log_fixed_counts,
    subexponential_witness, ConstructionPlan, GrowthTarget, Strategy,
};
use perigee::formats::{read_sequence_csv, ConstructRow};
use perigee::interval::{decimal_digits, Interval};
use perigee::numtheory::{least_prime_congruent_one, linnik_sweep};
use perigee::orbits::{
    growth_diagnostics, least_from_fixed, lemma_sandwich_check, rate_gap, realizability_check,
    CountSequence, SequenceKind,
};
use perigee::toral::{
    cyclotomic_index, delta_n_resultant, lehmer_growth_check, toral_fix_sequence, IntegerPolynomial,
};
use perigee::zeta::{has_nonnegative_integer_coeffs, orbit_product_form, rationality_probe, zeta_truncate};
use perigee::{Error, ExactZeta};

use table::{Format, Table};

#[derive(Parser, Debug)]
#[command(
    name = "perigee",
    version,
    about = "Periodic-point growth of compact group automorphisms",
    after_help = "Rates C are exact rationals: `a/b`, an integer, or a decimal such as 0.6931.\n\
                  Irrational rates like log 2 must be given as rational approximations."
)]
struct Cli {
    /// Fractional bits for logarithms and interval enclosures.
    #[arg(long, global = true, env = "PERIGEE_PRECISION_BITS", default_value_t = 128,
          value_parser = clap::value_parser!(u32).range(16..=65536))]
    precision_bits: u32,

    /// Seed for any randomized generation; output is a pure function of the
    /// arguments and this seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the product automorphism and tabulate its period counts.
    #[command(group(ArgGroup::new("rate").required(true).args(["c", "target"])))]
    Construct {
        /// Finite target rate C.
        #[arg(long = "C", value_name = "RATE")]
        c: Option<String>,
        /// Target: `zero`, `infinite`, or a rate.
        #[arg(long)]
        target: Option<String>,
        /// paper, compensated, subexponential:<gamma> or infinite. Defaults
        /// to infinite for an infinite target and paper otherwise.
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Trailing window for the rate summary.
        #[arg(long, default_value_t = 10)]
        window: usize,
        /// Also write the plan as JSON to this file.
        #[arg(long)]
        plan_out: Option<PathBuf>,
    },
    /// Enumerate a truncated plan and compare with the closed forms.
    Oracle {
        #[arg(long)]
        plan: PathBuf,
        /// Number of leading components to materialize (default: all).
        #[arg(long)]
        components: Option<usize>,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = perigee::construction::DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Growth, realizability and sandwich diagnostics of a sequence file.
    Analyze {
        /// CSV with header `n,value`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        window: usize,
        /// Optional comparison target (`zero`, `infinite` or a rate).
        #[arg(long)]
        target: Option<String>,
    },
    /// Lehmer sequence and Mahler measure of a monic integer polynomial.
    Lehmer {
        /// Coefficients `c0,c1,...,cd`, low-to-high, with `cd = 1`.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 20)]
        max_n: u64,
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
    },
    /// Truncated zeta function of a sequence file, with a rationality probe.
    Zeta {
        /// CSV with header `n,value`.
        #[arg(long)]
        input: PathBuf,
        /// Truncation order M (default: the file's horizon).
        #[arg(long)]
        order: Option<usize>,
    },
    /// Least primes `= 1 mod n` with the ratio `p_n / n^5.5`.
    Primes {
        #[arg(long, default_value_t = 100)]
        max_n: u64,
    },
}

enum Failure {
    Lib(Error),
    Mismatch(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Mismatch(_) => 1,
        Failure::Lib(Error::Degenerate(_)) => 4,
        Failure::Lib(e) if e.is_budget() => 3,
        Failure::Lib(_) | Failure::Io(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Vec::new();
    let result = run(&cli, &mut out);
    // Tables are emitted even on an oracle mismatch.
    io::stdout().write_all(&out).ok();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Lib(Error::Degenerate(k)) => {
                    eprintln!("error: degenerate polynomial, cyclotomic index {k}")
                }
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Mismatch(m) => eprintln!("error: {m}"),
                Failure::Io(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_code(&f))
        }
    }
}

fn run(cli: &Cli, out: &mut Vec<u8>) -> Result<(), Failure> {
    let prec = cli.precision_bits;
    let digits = decimal_digits(prec);
    let table = match &cli.command {
        Command::Construct {
            c,
            target,
            strategy,
            max_n,
            window,
            plan_out,
        } => {
            let target: GrowthTarget = match (c, target) {
                (Some(c), _) => c.parse()?,
                (None, Some(t)) => t.parse()?,
                (None, None) => unreachable!("clap requires one of --C, --target"),
            };
            let strategy: Strategy = match strategy {
                Some(s) => s.parse()?,
                None if target == GrowthTarget::Infinite => Strategy::Infinite,
                None => Strategy::Paper,
            };
            if *max_n == 0 {
                return Err(Error::Invalid("--max-n must be positive".into()).into());
            }
            let plan = build_plan(target, strategy, *max_n)?;
            if let Some(path) = plan_out {
                fs::write(path, plan.to_json() + "\n")?;
            }
            construct_table(&plan, *window, prec, digits)?
        }
        Command::Oracle {
            plan,
            components,
            max_n,
            budget,
        } => {
            let text = fs::read_to_string(plan)?;
            let plan = ConstructionPlan::from_json(&text)?;
            let (table, mismatches) = oracle_table(&plan, components.unwrap_or(plan.horizon()), *max_n, *budget)?;
            if mismatches > 0 {
                table.write(out, cli.format)?;
                return Err(Failure::Mismatch(format!("{mismatches} oracle mismatches")));
            }
            table
        }
        Command::Analyze { input, window, target } => {
            let seq = read_sequence_csv(fs::File::open(input)?, SequenceKind::Fixed)?;
            let target = target.as_deref().map(str::parse::<GrowthTarget>).transpose()?;
            analyze_table(&seq, *window, target, prec, digits)?
        }
        Command::Lehmer { poly, max_n, tolerance } => {
            let f: IntegerPolynomial = poly.parse()?;
            lehmer_table(&f, *max_n, *tolerance, prec, digits)?
        }
        Command::Zeta { input, order } => {
            let seq = read_sequence_csv(fs::File::open(input)?, SequenceKind::Fixed)?;
            zeta_table(&seq, order.unwrap_or(seq.horizon()))?
        }
        Command::Primes { max_n } => primes_table(*max_n)?,
    };
    table.write(out, cli.format)?;
    Ok(())
}

fn dec(iv: &Interval, digits: usize) -> String {
    iv.to_decimal(digits)
}

fn construct_table(plan: &ConstructionPlan, window: usize, prec: u32, digits: usize) -> Result<Table, Failure> {
    let n_max = plan.horizon();
    let logs = log_fixed_counts(plan, prec);
    let report = plan.claimed_vs_exact_report(n_max)?;
    let rates: Vec<Interval> = logs.iter().enumerate().map(|(i, l)| l.div_int(i as u64 + 1)).collect();
    let rows: Vec<ConstructRow> = (1..=n_max)
        .map(|n| {
            let c = plan.component(n);
            let row = report.row(n);
            Ok(ConstructRow {
                n: n as u64,
                p: c.p.to_string(),
                g: c.g.to_string(),
                k: c.k,
                f_factored: plan.fixed_count(n)?.to_string(),
                f_log: dec(&logs[n - 1], digits),
                l_exact: row.exact.to_string(),
                l_claimed: row.claimed.to_string(),
                rate: dec(&rates[n - 1], digits),
            })
        })
        .collect::<Result<_, Error>>()?;
    let mut table = Table::from_records(&rows);

    table.summary("target", plan.target.to_string());
    table.summary("strategy", plan.strategy.to_string());
    table.summary("N", n_max);
    let window = window.clamp(1, n_max);
    let tail = &rates[n_max - window..];
    let inf = tail.iter().skip(1).fold(tail[0].clone(), |a, b| a.min(b));
    let sup = tail.iter().skip(1).fold(tail[0].clone(), |a, b| a.max(b));
    table.summary("window", window);
    table.summary("rate_window_inf", dec(&inf, digits));
    table.summary("rate_window_sup", dec(&sup, digits));
    if let Some(c) = plan.target.rate() {
        let deficits: Vec<Interval> = logs
            .iter()
            .enumerate()
            .map(|(i, l)| Interval::from_rational(&(c * num_rational::BigRational::from_integer(BigInt::from(i + 1))), prec).sub(l))
            .collect();
        let lo = deficits.iter().skip(1).fold(deficits[0].clone(), |a, b| a.min(b));
        let hi = deficits.iter().skip(1).fold(deficits[0].clone(), |a, b| a.max(b));
        table.summary("deficit_min", dec(&lo, digits));
        table.summary("deficit_max", dec(&hi, digits));
    }
    match &plan.strategy {
        Strategy::Compensated if plan.target.rate().is_some() => {
            let env = compensated_envelope(plan, prec)?;
            let certified = env.rows.iter().filter(|r| r.certified).count();
            table.summary("envelope_certified", certified);
            table.summary("envelope_negative_budget", json!(env.negative_budget));
            table.summary("envelope_unverified", json!(env.unverified));
        }
        Strategy::Infinite => {
            let rows = infinite_certificate(plan, prec)?;
            let bad: Vec<usize> = rows.iter().filter(|r| !r.holds).map(|r| r.n).collect();
            table.summary("infinite_certificate_failures", json!(bad));
        }
        Strategy::Subexponential(_) => {
            let rows = subexponential_witness(plan)?;
            let bad: Vec<usize> = rows.iter().filter(|r| !r.holds).map(|r| r.n).collect();
            table.summary("subexponential_witness_failures", json!(bad));
        }
        _ => {}
    }
    table.summary("claimed_vs_exact_discrepancies", report.discrepancies());
    table.summary("claimed_lower_bound_holds", report.lower_bound_holds());
    table.summary("characterization_failures", json!(report.characterization_failures()));
    Ok(table)
}

fn oracle_table(plan: &ConstructionPlan, m: usize, n_max: usize, budget: u64) -> Result<(Table, usize), Failure> {
    if n_max == 0 {
        return Err(Error::Invalid("--max-n must be positive".into()).into());
    }
    let oracle = enumerate_oracle(plan, m, n_max, budget)?;
    let closed = CountSequence::fixed(
        (1..=n_max)
            .map(|n| plan.fixed_count_truncated(n, m).map(|f| BigInt::from(f.value())))
            .collect::<Result<Vec<_>, _>>()?,
    );
    let closed_least = least_from_fixed(&closed)?;
    let mut table = Table::new(&["n", "F_oracle", "F_closed", "L_oracle", "L_closed", "status"]);
    let mut mismatches = 0;
    for n in 1..=n_max {
        let ok = oracle.fixed.get(n) == closed.get(n) && oracle.least.get(n) == closed_least.get(n);
        mismatches += usize::from(!ok);
        table.push(vec![
            n.to_string(),
            oracle.fixed.get(n).to_string(),
            closed.get(n).to_string(),
            oracle.least.get(n).to_string(),
            closed_least.get(n).to_string(),
            if ok { "MATCH" } else { "MISMATCH" }.to_string(),
        ]);
    }
    if !oracle.lcm_rule_holds {
        mismatches += 1;
    }
    table.summary("components", m);
    table.summary("group_order", oracle.group_order);
    table.summary("lcm_rule_holds", oracle.lcm_rule_holds);
    table.summary("mismatches", mismatches);
    Ok((table, mismatches))
}

fn analyze_table(
    seq: &CountSequence,
    window: usize,
    target: Option<GrowthTarget>,
    prec: u32,
    digits: usize,
) -> Result<Table, Failure> {
    let least = least_from_fixed(seq)?;
    let diag = growth_diagnostics(seq, target.as_ref().unwrap_or(&GrowthTarget::Infinite), window, prec)?;
    let real = realizability_check(seq)?;
    let sandwich = lemma_sandwich_check(seq, &least)?;
    let gap = rate_gap(seq, window, prec)?;
    let mut table = Table::new(&["n", "value", "least", "rate", "realizable_at_n"]);
    for n in 1..=seq.horizon() {
        let rate = diag.rate_at(n).map(|p| dec(&p.rate, digits)).unwrap_or_default();
        let r = &real.rows[n - 1];
        table.push(vec![
            n.to_string(),
            seq.get(n).to_string(),
            least.get(n).to_string(),
            rate,
            (r.nonnegative && r.divisible).to_string(),
        ]);
    }
    table.summary("realizable", real.realizable);
    if let Some(bad) = real.first_failure() {
        table.summary("first_failure", bad.n);
    }
    table.summary("zeros", json!(diag.zeros));
    table.summary("window", diag.window_len);
    table.summary("rate_window_inf", dec(&diag.window_inf, digits));
    table.summary("rate_window_sup", dec(&diag.window_sup, digits));
    if let (Some(t), Some(d)) = (&target, &diag.window_distance) {
        table.summary("target", t.to_string());
        table.summary("window_distance_to_target", dec(d, digits));
    }
    table.summary("sandwich_holds", sandwich.holds());
    table.summary("sandwich_violations", json!(sandwich.violations));
    table.summary("rate_gap_exceptions", json!(gap.exceptions));
    Ok(table)
}

fn lehmer_table(f: &IntegerPolynomial, max_n: u64, tolerance: f64, prec: u32, digits: usize) -> Result<Table, Failure> {
    if let Some(k) = cyclotomic_index(f) {
        return Err(Error::Degenerate(k).into());
    }
    if max_n == 0 {
        return Err(Error::Invalid("--max-n must be positive".into()).into());
    }
    let seq = toral_fix_sequence(f, max_n as usize)?;
    let mut table = Table::new(&["n", "delta", "rate"]);
    let mut routes_agree = true;
    for n in 1..=max_n as usize {
        let d = seq.get(n);
        routes_agree &= delta_n_resultant(f, n as u64) == *d;
        let rate = Interval::ln_natural(d.magnitude(), prec).div_int(n as u64);
        table.push(vec![n.to_string(), d.to_string(), dec(&rate, digits)]);
    }
    let report = lehmer_growth_check(f, max_n, tolerance, prec)?;
    table.summary("polynomial", f.to_string());
    table.summary("mahler_measure", dec(&report.mahler.measure, digits));
    table.summary("entropy", dec(report.entropy(), digits));
    table.summary("near_unit_roots", report.mahler.near_unit_roots());
    table.summary("gap_at_N", dec(&report.gap, digits));
    table.summary("within_tolerance", report.within_tolerance);
    table.summary("envelope", report.envelope.map_or(Value::Null, |e| json!(format!("{e:.6e}"))));
    table.summary("determinant_resultant_agree", routes_agree);
    Ok(table)
}

fn zeta_table(seq: &CountSequence, order: usize) -> Result<Table, Failure> {
    let z: ExactZeta = zeta_truncate(seq, order)?;
    let mut table = Table::new(&["m", "numerator", "denominator"]);
    for (m, c) in z.coeffs().iter().enumerate() {
        table.push(vec![m.to_string(), c.numer().to_string(), c.denom().to_string()]);
    }
    table.summary("recurrence_holds", z.satisfies_recurrence());
    table.summary("nonnegative_integer_coefficients", has_nonnegative_integer_coeffs(&z));
    match orbit_product_form::<num_rational::BigRational>(seq, order) {
        Ok(p) => table.summary("product_form_matches", p.coeffs() == z.coeffs()),
        Err(e) => table.summary("product_form_matches", format!("n/a ({e})")),
    }
    if order >= 8 {
        let verdict = rationality_probe(&z)?;
        table.summary("probe", serde_json::to_value(&verdict).expect("verdict serializes"));
    } else {
        table.summary("probe", "n/a (needs M >= 8)");
    }
    Ok(table)
}

fn primes_table(max_n: u64) -> Result<Table, Failure> {
    if max_n == 0 {
        return Err(Error::Invalid("--max-n must be positive".into()).into());
    }
    let mut table = Table::new(&["n", "p", "ratio"]);
    let first = least_prime_congruent_one(1, &num_bigint::BigUint::from(0u32))?;
    table.push(vec!["1".into(), first.p.to_string(), format!("{:.6e}", first.heath_brown_ratio())]);
    if max_n >= 2 {
        let sweep = linnik_sweep(2, max_n)?;
        for r in &sweep.rows {
            table.push(vec![r.modulus.to_string(), r.p.to_string(), format!("{:.6e}", r.heath_brown_ratio())]);
        }
        table.summary("max_ratio_n_ge_2", format!("{:.6e}", sweep.max_ratio));
        table.summary("argmax", sweep.argmax);
        table.summary("violations", json!(sweep.violations));
    }
    Ok(table)
}
