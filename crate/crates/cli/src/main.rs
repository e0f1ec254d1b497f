//! Command-line front end: verification, exhaustive search, catalog
//! reproduction and iterated-conjugation exploration.
//!
//! Exit codes are stable across subcommands: 0 = verified/pass,
//! 1 = checked and false, 2 = usage or precondition error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use niho_core::families::{row_tag, table1_catalog, RowCondition};
use niho_core::mobius::{e_sequence, form_at, phi_from_a, IterateForm, ProjPoint};
use niho_core::permcheck::{brute_force_check, zieve_check, TrinomialSpec};
use niho_core::residue::{niho_pair, Fraction};
use niho_core::search::{csv_header, exhaustive_search_with_jobs};
use niho_core::{Error, FieldCtx, FieldElem, ModulusTable};

/// Environment variable naming an alternate modulus table file.
const MODULUS_TABLE_ENV: &str = "NIHO_MODULUS_TABLE";

#[derive(Parser)]
#[command(
    name = "niho",
    version,
    about = "Permutation trinomials of Niho type over GF(2^(2m)): verify, search, reproduce"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Full-field brute force.
    Brute,
    /// Unit-circle criterion.
    Zieve,
    /// Run both engines and require agreement.
    Both,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether x^r + x^(s(2^m-1)+r) + x^(t(2^m-1)+r) permutes GF(2^(2m)).
    Verify {
        #[arg(long)]
        m: u32,
        /// Exponent parameter s: integer or fraction mod 2^m+1 (e.g. 2, -1, 4/3).
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Exponent parameter t, same grammar as s.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 1)]
        r: u64,
        /// Explicit modulus bitmask (0x-prefixed hex or decimal).
        #[arg(long)]
        modulus: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Brute)]
        method: Method,
    },
    /// List every permutation pair (s, t) with 1 <= s <= t <= 2^m.
    Search {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        r: u64,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
        /// Worker threads; output bytes do not depend on this.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Re-verify the known-pairs catalog by brute force over a range of m.
    Table {
        /// Inclusive range, e.g. 2..4.
        #[arg(long = "m-range")]
        m_range: String,
    },
    /// Print the coefficient sequence e_i of the iterated conjugation forms
    /// and verify them against Frobenius powers on the unit circle.
    LemmaIterate {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        /// Unit-circle element: 0x-prefixed hex bits, or a plain decimal
        /// index into the unit-circle enumeration.
        #[arg(long)]
        a: String,
        /// Largest index i to print (default 2m).
        #[arg(long)]
        imax: Option<usize>,
        #[arg(long)]
        modulus: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify {
            m,
            s,
            t,
            r,
            modulus,
            method,
        } => cmd_verify(m, &s, &t, r, modulus.as_deref(), method),
        Command::Search {
            m,
            r,
            format,
            jobs,
            modulus,
        } => cmd_search(m, r, format, jobs, modulus.as_deref()),
        Command::Table { m_range } => cmd_table(&m_range),
        Command::LemmaIterate {
            m,
            k,
            a,
            imax,
            modulus,
        } => cmd_lemma_iterate(m, k, &a, imax, modulus.as_deref()),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

/// Builds the field context: explicit --modulus wins, then the table named
/// by NIHO_MODULUS_TABLE, then the built-in table.
fn make_ctx(m: u32, modulus: Option<&str>) -> Result<FieldCtx, Error> {
    if let Some(mask) = modulus {
        return FieldCtx::with_modulus(m, niho_core::gf2n::parse_bitmask(mask)?);
    }
    if let Ok(path) = std::env::var(MODULUS_TABLE_ENV) {
        let table = ModulusTable::load(std::path::Path::new(&path))?;
        return FieldCtx::from_table(m, &table);
    }
    FieldCtx::new(m)
}

fn cmd_verify(
    m: u32,
    s: &str,
    t: &str,
    r: u64,
    modulus: Option<&str>,
    method: Method,
) -> Result<ExitCode, Error> {
    if r < 1 {
        return Err(Error::RangeError("r must be at least 1".into()));
    }
    let s: Fraction = s.parse()?;
    let t: Fraction = t.parse()?;
    let ctx = make_ctx(m, modulus)?;
    let pair = niho_pair(s, t, m)?;
    let spec = TrinomialSpec::new(r, pair);

    let reports = match method {
        Method::Brute => vec![brute_force_check(&ctx, &spec)],
        Method::Zieve => vec![zieve_check(&ctx, &spec)],
        Method::Both => vec![brute_force_check(&ctx, &spec), zieve_check(&ctx, &spec)],
    };
    for report in &reports {
        println!("{}", report.to_json());
    }
    if reports.len() == 2 && reports[0].is_permutation != reports[1].is_permutation {
        return Err(Error::ConsistencyError(
            "brute force and circle criterion disagree".into(),
        ));
    }
    Ok(if reports[0].is_permutation {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_search(
    m: u32,
    r: u64,
    format: Format,
    jobs: Option<usize>,
    modulus: Option<&str>,
) -> Result<ExitCode, Error> {
    if r < 1 {
        return Err(Error::RangeError("r must be at least 1".into()));
    }
    let ctx = make_ctx(m, modulus)?;
    let hits = exhaustive_search_with_jobs(&ctx, r, jobs)?;
    match format {
        Format::Jsonl => {
            for hit in &hits {
                println!("{}", hit.to_jsonl());
            }
        }
        Format::Csv => {
            println!("{}", csv_header());
            for hit in &hits {
                println!("{}", hit.to_csv_row());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_m_range(spec: &str) -> Result<(u32, u32), Error> {
    let bad = || Error::RangeError(format!("cannot parse m range {spec:?}, expected A..B"));
    let (lo, hi) = spec.split_once("..").ok_or_else(bad)?;
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo < 2 || hi > 8 || lo > hi {
        return Err(Error::RangeError(format!(
            "m range {lo}..{hi} outside 2 <= A <= B <= 8"
        )));
    }
    Ok((lo, hi))
}

fn residues(pair: &niho_core::NihoPair) -> String {
    format!("({},{})", pair.s, pair.t)
}

/// Space-free rendering of a row condition for the fixed-column table output.
fn condition_code(condition: RowCondition) -> &'static str {
    match condition {
        RowCondition::AllM => "all-m",
        RowCondition::MEven => "m-even",
        RowCondition::Gcd3MIsOne => "gcd(3,m)=1",
        RowCondition::Gcd5CircleIsOne => "gcd(5,2^m+1)=1",
        RowCondition::M2Or4Mod6 => "m=2,4(mod6)",
        RowCondition::CoprimePow2Minus1 => "gcd(2^k-1,2^m+1)=1,k<m",
        RowCondition::CoprimePow2Plus1 => "gcd(2^k+1,2^m+1)=1",
        RowCondition::External => "external",
    }
}

#[derive(Default)]
struct TableTally {
    pass: usize,
    fail: usize,
    skipped: usize,
    anomalies: usize,
}

fn cmd_table(m_range: &str) -> Result<ExitCode, Error> {
    let (lo, hi) = parse_m_range(m_range)?;
    let mut tally = TableTally::default();

    for m in lo..=hi {
        let ctx = FieldCtx::new(m)?;
        for entry in table1_catalog() {
            if entry.condition == RowCondition::External {
                println!(
                    "m={m} row=row{} kind=info   note=external-condition-not-evaluated-here",
                    entry.row
                );
                continue;
            }
            let k_range: Vec<Option<u32>> = match entry.condition {
                RowCondition::CoprimePow2Minus1 => (1..m).map(Some).collect(),
                RowCondition::CoprimePow2Plus1 => (1..=m).map(Some).collect(),
                _ => vec![None],
            };
            for k in k_range {
                check_table_row(&ctx, entry, k, &mut tally)?;
            }
        }
    }
    println!(
        "summary: pass={} fail={} skipped={} anomalies={}",
        tally.pass, tally.fail, tally.skipped, tally.anomalies
    );
    Ok(if tally.fail == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn check_table_row(
    ctx: &FieldCtx,
    entry: &niho_core::families::FamilyEntry,
    k: Option<u32>,
    tally: &mut TableTally,
) -> Result<(), Error> {
    let m = ctx.m();
    let tag = row_tag(entry.row, k);
    let (fs, ft) = entry.pair.instantiate(k)?;
    if !entry.condition.holds(m, k)? {
        tally.skipped += 1;
        println!(
            "m={m} row={tag} kind=main   pair=({fs},{ft}) result=SKIPPED \
             reason=condition-not-met({})",
            condition_code(entry.condition)
        );
        return Ok(());
    }
    let pair = niho_pair(fs, ft, m)?;
    let spec = TrinomialSpec::plain(pair);
    let ok = brute_force_check(ctx, &spec).is_permutation;
    if ok {
        tally.pass += 1;
    } else {
        tally.fail += 1;
    }
    println!(
        "m={m} row={tag} kind=main   pair=({fs},{ft}) residues={} result={}",
        residues(&pair),
        if ok { "PASS" } else { "FAIL" }
    );
    for (es, et) in entry.equivalents.instantiate(k)? {
        match niho_pair(es, et, m) {
            Err(_) => {
                tally.skipped += 1;
                println!(
                    "m={m} row={tag} kind=equiv  pair=({es},{et}) result=SKIPPED \
                     reason=denominator-not-invertible"
                );
            }
            Ok(equiv_pair) => {
                let equiv_spec = TrinomialSpec::plain(equiv_pair);
                if brute_force_check(ctx, &equiv_spec).is_permutation {
                    tally.pass += 1;
                    println!(
                        "m={m} row={tag} kind=equiv  pair=({es},{et}) residues={} result=PASS",
                        residues(&equiv_pair)
                    );
                } else {
                    // listed equivalents can fail outside the sibling row's
                    // condition; reported, not fatal
                    tally.anomalies += 1;
                    println!(
                        "m={m} row={tag} kind=equiv  pair=({es},{et}) residues={} result=ANOMALY \
                         note=listed-pair-is-not-a-permutation-here",
                        residues(&equiv_pair)
                    );
                }
            }
        }
    }
    Ok(())
}

fn parse_circle_element(ctx: &FieldCtx, text: &str) -> Result<FieldElem, Error> {
    if let Some(hex) = text.strip_prefix("0x") {
        return ctx.parse_elem(hex);
    }
    let index: usize = text.parse().map_err(|_| {
        Error::RangeError(format!(
            "--a expects 0x-prefixed hex bits or a decimal circle index, got {text:?}"
        ))
    })?;
    let circle = ctx.unit_circle();
    circle.get(index).copied().ok_or_else(|| {
        Error::RangeError(format!(
            "circle index {index} out of range 0..{}",
            circle.len()
        ))
    })
}

fn cmd_lemma_iterate(
    m: u32,
    k: u32,
    a_text: &str,
    imax: Option<usize>,
    modulus: Option<&str>,
) -> Result<ExitCode, Error> {
    let ctx = make_ctx(m, modulus)?;
    let a = parse_circle_element(&ctx, a_text)?;
    let imax = imax.unwrap_or(2 * m as usize).max(1);

    // DomainError here covers both a off the circle and a^3 = 1
    let seq = e_sequence(&ctx, a, k, imax)?;
    let circle_index = ctx
        .unit_circle()
        .iter()
        .position(|&u| u == a)
        .expect("a validated on the circle");
    println!("m={m} k={k} a={a} circle-index={circle_index} e1={}", seq.e1);
    for i in 1..=imax {
        let entry = seq.entries[i - 1];
        match form_at(&ctx, &seq, i)? {
            IterateForm::Identity => println!("i={i} e={entry} form=identity"),
            IterateForm::Map(map) => {
                let (ca, cb, cc, cd) = map.coeffs();
                println!("i={i} e={entry} form=map coeffs=({ca},{cb},{cc},{cd})");
            }
        }
    }

    let phi = phi_from_a(&ctx, a).expect("validated by e_sequence");
    let solutions: Vec<FieldElem> = ctx
        .unit_circle()
        .iter()
        .copied()
        .filter(|&x| {
            ProjPoint::Finite(ctx.frobenius(x, k)) == phi.apply(&ctx, ProjPoint::Finite(x))
        })
        .collect();
    println!("solutions-on-circle={}", solutions.len());

    let mut verified = true;
    for i in 2..=imax {
        let form = form_at(&ctx, &seq, i)?;
        for &x in &solutions {
            let expected = ProjPoint::Finite(ctx.frobenius(x, i as u32 * k));
            if form.eval(&ctx, ProjPoint::Finite(x)) != expected {
                verified = false;
                println!("mismatch: i={i} x={x}");
            }
        }
    }
    println!(
        "verified i=2..{imax} against frobenius: {}",
        if verified { "OK" } else { "MISMATCH" }
    );
    Ok(if verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
