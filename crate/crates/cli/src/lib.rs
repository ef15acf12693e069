//! Command-line front end for the `cayley-dickson` library.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{ensure, Context, Result};
use cayley_dickson::algebra::{make_algebra, Convention};
use cayley_dickson::fibonacci::{
    energy, fib_norm_direct, fib_norm_formula, invertibility_threshold, QuaternionParams,
    DEFAULT_THRESHOLD_NMAX,
};
use cayley_dickson::rational::{format_rational, parse_rational, parse_rational_list, Rational};
use cayley_dickson::residue::{
    decode_symbols, encode_symbols, make_w, residue_field, ResidueField, UElement,
};
use cayley_dickson::twist::{
    basis_product, build_table, classify_blocks, BasisIndex, BlockOrientation, TwistTable,
    DEFAULT_MAX_TABLE_DEPTH,
};
use cayley_dickson::verify::{run_suite, Suite, SuiteConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "cayley-dickson",
    version,
    about = "Exact Cayley-Dickson algebra tables and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Eq11,
    Eq31,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Eq11 => Convention::Eq11,
            ConventionArg::Eq31 => Convention::Eq31,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Core,
    Twist,
    Fib,
    Residue,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Core => Suite::Core,
            SuiteArg::Twist => Suite::Twist,
            SuiteArg::Fib => Suite::Fib,
            SuiteArg::Residue => Suite::Residue,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full table of structure constants `e_p e_q = sign * gamma^mask * e_index`.
    MulTable {
        #[arg(long)]
        t: usize,
        /// Doubling parameters g1,..,gt (integers or n/d); all -1 when omitted.
        #[arg(long, allow_hyphen_values = true)]
        gammas: Option<String>,
        #[arg(long, value_enum, default_value = "eq11")]
        convention: ConventionArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Sign and index of one product of basis units (all parameters -1).
    Twist {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "eq11")]
        convention: ConventionArg,
    },
    /// Classifies the aligned 2x2 blocks of the sign table.
    Blocks {
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value = "eq11")]
        convention: ConventionArg,
    },
    /// Runs the randomized invariant suites.
    Verify {
        /// Largest depth for the core and twist suites.
        #[arg(long, default_value_t = 4)]
        t: usize,
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = SuiteConfig::default().samples)]
        samples: usize,
    },
    /// Norm of the n-th Fibonacci quaternion, directly and in closed form.
    FibNorm {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        alpha1: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha2: String,
    },
    /// Sign of E and the index from which n(F_n) keeps that sign.
    Threshold {
        #[arg(long, allow_hyphen_values = true)]
        alpha1: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha2: String,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_NMAX)]
        nmax: u64,
    },
    /// Representatives and label table of U / (pi).
    ResidueField {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Labels of elements a+bw of U.
    Label {
        #[command(flatten)]
        field: FieldArgs,
        /// Elements as a,b; repeat the flag for several.
        #[arg(long = "element", required = true, allow_hyphen_values = true)]
        elements: Vec<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Representatives of symbols in 0..p.
    Encode {
        #[command(flatten)]
        field: FieldArgs,
        /// Comma-separated symbols.
        #[arg(long)]
        symbols: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Expected n(pi); checked when given.
    #[arg(long)]
    pub p: Option<i64>,
    /// pi = a + b w as a,b.
    #[arg(long, allow_hyphen_values = true)]
    pub pi: String,
    /// w = c0 + c1 e_i + c2 e_j + c3 e_k as c0,c1,c2,c3.
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    #[arg(long)]
    pub t: usize,
    /// The imaginary units i,j,k carrying c1,c2,c3.
    #[arg(long, default_value = "1,2,3")]
    pub indices: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub p: u64,
    pub q: u64,
    pub index: u64,
    pub sign: i8,
    pub gamma_mask: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulTable {
    pub t: usize,
    pub convention: String,
    pub gammas: Vec<String>,
    pub entries: Vec<TableRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRow {
    pub label: i64,
    pub a: i64,
    pub b: i64,
    pub representative: String,
    pub norm: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelTable {
    pub p: i64,
    pub q: i64,
    pub m: i64,
    pub pi: String,
    pub w_image: i64,
    pub entries: Vec<LabelRow>,
}

fn parse_ints<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<T>()
                .ok()
                .with_context(|| format!("bad {what} entry {v:?}"))
        })
        .collect()
}

fn parse_array<const N: usize, T: std::str::FromStr + Copy + Default>(
    s: &str,
    what: &str,
) -> Result<[T; N]> {
    let v: Vec<T> = parse_ints(s, what)?;
    ensure!(
        v.len() == N,
        "{what} needs {N} comma-separated values, got {}",
        v.len()
    );
    let mut out = [T::default(); N];
    out.copy_from_slice(&v);
    Ok(out)
}

pub fn mul_table(t: usize, gammas: &[Rational], convention: Convention) -> Result<MulTable> {
    ensure!(
        t <= DEFAULT_MAX_TABLE_DEPTH,
        "t = {t} exceeds the table limit {DEFAULT_MAX_TABLE_DEPTH}"
    );
    let sig = make_algebra(t, gammas.to_vec(), convention)?;
    let table: TwistTable = build_table(t, convention)?;
    let n = table.size();
    let mut entries = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            let c = table.entry(p, q);
            entries.push(TableRow {
                p: p as u64,
                q: q as u64,
                index: (p ^ q) as u64,
                sign: c.sign(),
                gamma_mask: c.mask_string(t),
            });
        }
    }
    Ok(MulTable {
        t,
        convention: convention.name().to_string(),
        gammas: sig.gammas().iter().map(format_rational).collect(),
        entries,
    })
}

fn field_from_args(args: &FieldArgs) -> Result<ResidueField> {
    let coeffs: [i64; 4] = parse_array(&args.w, "--w")?;
    let indices: [usize; 3] = parse_array(&args.indices, "--indices")?;
    let pi: UElement = args.pi.parse()?;
    let g = make_w(args.t, indices, coeffs)?;
    let field = residue_field(g.ring(), pi)?;
    if let Some(p) = args.p {
        ensure!(
            field.modulus() == p,
            "n({pi}) = {} but --p {p} was given",
            field.modulus()
        );
    }
    Ok(field)
}

pub fn label_table(field: &ResidueField) -> Result<LabelTable> {
    let ring = field.ring();
    let entries = field
        .label_table()
        .into_iter()
        .map(|(label, x)| {
            Ok(LabelRow {
                label,
                a: x.a,
                b: x.b,
                representative: x.to_string(),
                norm: i64::try_from(ring.norm(x)?)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(LabelTable {
        p: field.modulus(),
        q: ring.q,
        m: ring.m,
        pi: field.pi().to_string(),
        w_image: field.w_image(),
        entries,
    })
}

fn write_csv<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn parse_params(a1: &str, a2: &str) -> Result<QuaternionParams> {
    let params = QuaternionParams::new(parse_rational(a1)?, parse_rational(a2)?);
    params.signature()?;
    Ok(params)
}

/// Executes one command, writing its artifact to `out`. Returns `false` when
/// a check reported failure.
pub fn execute(command: &Command, out: &mut dyn Write) -> Result<bool> {
    match command {
        Command::MulTable {
            t,
            gammas,
            convention,
            format,
        } => {
            let gammas = match gammas {
                Some(g) => parse_rational_list(g)?,
                None => vec![Rational::from_integer((-1).into()); *t],
            };
            let table = mul_table(*t, &gammas, (*convention).into())?;
            match format {
                Format::Csv => write_csv(out, &table.entries)?,
                Format::Json => write_json(out, &table)?,
            }
        }
        Command::Twist {
            t,
            p,
            q,
            convention,
        } => {
            let sig = make_algebra(
                *t,
                vec![Rational::from_integer((-1).into()); *t],
                (*convention).into(),
            )?;
            let (c, r) = basis_product(BasisIndex(*p), BasisIndex(*q), &sig)?;
            writeln!(out, "sign: {}", c.real_sign())?;
            writeln!(out, "index: {}", r.0)?;
            writeln!(out, "gamma_mask: {}", c.mask_string(*t))?;
        }
        Command::Blocks { t, convention } => {
            ensure!(*t >= 1, "blocks need t >= 1");
            let table = build_table(*t, (*convention).into())?;
            let partition = classify_blocks(
                &table,
                BlockOrientation::for_convention((*convention).into()),
            )?;
            for i in 0..partition.side {
                let row: Vec<String> = (0..partition.side)
                    .map(|j| {
                        partition
                            .kind(i, j)
                            .map_or("?".to_string(), |k| k.label().to_string())
                    })
                    .map(|s| format!("{s:>2}"))
                    .collect();
                writeln!(out, "{}", row.join(" "))?;
            }
            let n = partition.block_count();
            let failures = partition.failures().len();
            if failures == 0 {
                writeln!(out, "all {n} blocks classified: PASS")?;
            } else {
                writeln!(out, "{failures} of {n} blocks unclassified: FAIL")?;
            }
            return Ok(failures == 0);
        }
        Command::Verify {
            t,
            suite,
            seed,
            samples,
        } => {
            let config = SuiteConfig {
                seed: *seed,
                samples: *samples,
                max_depth: *t,
            };
            let report = run_suite((*suite).into(), &config)?;
            write!(out, "{report}")?;
            return Ok(report.passed());
        }
        Command::FibNorm { n, alpha1, alpha2 } => {
            let params = parse_params(alpha1, alpha2)?;
            let direct = fib_norm_direct(*n, &params)?;
            let formula = fib_norm_formula(*n, &params);
            writeln!(out, "direct: {}", format_rational(&direct))?;
            writeln!(out, "formula: {}", format_rational(&formula))?;
            writeln!(out, "equal: {}", direct == formula)?;
            return Ok(direct == formula);
        }
        Command::Threshold {
            alpha1,
            alpha2,
            nmax,
        } => {
            let params = parse_params(alpha1, alpha2)?;
            let e = energy(&params);
            writeln!(out, "E: {e}")?;
            writeln!(out, "sign: {}", e.sign())?;
            match invertibility_threshold(&params, *nmax)? {
                Some(n0) => writeln!(out, "n0: {n0}")?,
                None => writeln!(out, "n0: none up to {nmax}")?,
            }
        }
        Command::ResidueField { field, format } => {
            let table = label_table(&field_from_args(field)?)?;
            match format {
                Format::Csv => write_csv(out, &table.entries)?,
                Format::Json => write_json(out, &table)?,
            }
        }
        Command::Label {
            field,
            elements,
            format,
        } => {
            let field = field_from_args(field)?;
            let xs = elements
                .iter()
                .map(|e| e.parse::<UElement>().map_err(Into::into))
                .collect::<Result<Vec<_>>>()?;
            let labels = decode_symbols(&field, &xs)?;
            let rows: Vec<SymbolRow> = xs
                .iter()
                .zip(labels)
                .map(|(x, label)| SymbolRow {
                    element: x.to_string(),
                    label,
                })
                .collect();
            match format {
                Format::Csv => write_csv(out, &rows)?,
                Format::Json => write_json(out, &rows)?,
            }
        }
        Command::Encode {
            field,
            symbols,
            format,
        } => {
            let field = field_from_args(field)?;
            let symbols: Vec<i64> = parse_ints(symbols, "--symbols")?;
            let reps = encode_symbols(&field, &symbols)?;
            let rows: Vec<SymbolRow> = symbols
                .iter()
                .zip(reps)
                .map(|(&label, x)| SymbolRow {
                    element: x.to_string(),
                    label,
                })
                .collect();
            match format {
                Format::Csv => write_csv(out, &rows)?,
                Format::Json => write_json(out, &rows)?,
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolRow {
    pub element: String,
    pub label: i64,
}

/// Runs a parsed command line against `--output` or standard output.
/// `Ok(false)` means a check ran and failed.
pub fn run(cli: &Cli) -> Result<bool> {
    match &cli.output {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            let ok = execute(&cli.command, &mut w)?;
            w.flush()?;
            Ok(ok)
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            let ok = execute(&cli.command, &mut w)?;
            w.flush()?;
            Ok(ok)
        }
    }
}
