//! Command-line front end: parse algebra description files, run the exact
//! computations, and emit deterministic tables (text, CSV, or JSON).
//!
//! Exit codes: 0 success, 1 usage error, 2 file/validation error,
//! 3 mathematical precondition failure.

use clap::{CommandFactory, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use twistcoh::cdga::{Element, Presentation, DEFAULT_DIM_CAP};
use twistcoh::cdgafile::{self, CdgaFile};
use twistcoh::charclass;
use twistcoh::cohomology::{compute_cohomology, CohomologyRing};
use twistcoh::exactlin::format_scalar;
use twistcoh::hankel;
use twistcoh::mpoly::MPoly;
use twistcoh::report::{export, Format, Report, Section};
use twistcoh::twisted;

#[derive(Parser)]
#[command(
    name = "twistcoh",
    version,
    about = "Exact twisted cohomology, filtration spectral sequences, and \
             characteristic-class identities for finite graded-commutative \
             differential algebras"
)]
struct Cli {
    /// Output format: table, csv, or json
    #[arg(long, global = true, default_value = "table")]
    format: String,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Betti numbers and canonical representatives of H*(A, d)
    Cohomology { file: PathBuf },
    /// Z/2-graded twisted cohomology H(A, d - eta)
    Twisted { file: PathBuf },
    /// Filtration spectral sequence pages and stabilization
    Ss {
        file: PathBuf,
        #[arg(long, default_value_t = 7)]
        max_page: u32,
    },
    /// Triple Massey product {x, y, z} of closed elements
    Massey {
        file: PathBuf,
        x: String,
        y: String,
        z: String,
    },
    /// Iterated product {eta, ..., eta, x} with K copies of the file's twist
    MasseyEta {
        file: PathBuf,
        class: String,
        #[arg(long)]
        order: usize,
    },
    /// Invariant ring J: dimensions, bases, Poincare series
    Jring {
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
    },
    /// Blockwise Wang model of the universal twisted fibration
    Wang {
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
    },
    /// Hankel determinants, series quotients, and resultant identities
    Hankel {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        /// Certify h_(p,q)(c(a/b)) = R(a,b) and the vanishing range
        #[arg(long)]
        verify: bool,
        /// Check Moebius-reparametrization invariance of h_(p,p)
        #[arg(long)]
        reparam: bool,
    },
    /// exp(lambda*delta) lift of an invariant polynomial in x1, x2, ...
    Lift {
        expr: String,
        #[arg(long)]
        max_weight: u32,
    },
    /// Character of a monomial in Adams operations psi^(k1) psi^(k2) ...
    Psi {
        #[arg(required = true)]
        ks: Vec<i64>,
    },
    /// Action of tensoring by a line element on power sums s_0..s_n
    TensorAction {
        #[arg(long)]
        n: u32,
    },
    /// Print a built-in example file
    Example { name: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format: Format = match cli.format.parse() {
        Ok(f) => f,
        Err(e) => {
            let _ = Cli::command().error(clap::error::ErrorKind::InvalidValue, e).print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command, format) {
        Ok(Some(report)) => {
            print!("{}", export(&report, format));
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError {
        code: 1,
        message: msg.into(),
    }
}

fn file_error(msg: impl ToString) -> CliError {
    CliError {
        code: 2,
        message: msg.to_string(),
    }
}

fn math_error(msg: impl ToString) -> CliError {
    CliError {
        code: 3,
        message: msg.to_string(),
    }
}

fn dim_cap() -> Result<u128, CliError> {
    match std::env::var("TWISTCOH_MAX_DIM") {
        Ok(v) => v
            .parse::<u128>()
            .map_err(|_| usage(format!("TWISTCOH_MAX_DIM must be an integer, got `{v}`"))),
        Err(_) => Ok(10_000.min(DEFAULT_DIM_CAP)),
    }
}

fn load(path: &PathBuf) -> Result<(CdgaFile, String), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| file_error(format!("{}: {}", path.display(), e)))?;
    let file = cdgafile::parse_file_with_cap(&text, dim_cap()?).map_err(file_error)?;
    Ok((file, text))
}

fn require_twist(file: &CdgaFile) -> Result<Element, CliError> {
    let eta = file
        .twist
        .clone()
        .ok_or_else(|| math_error("this command needs a `twist = ...` line in the file"))?;
    if let Some(d) = file.presentation.element_degree(&eta) {
        if d != 3 {
            eprintln!(
                "warning: twist has degree {d}, not 3; the filtration pages still \
                 make sense but the page-vs-Massey comparison is only calibrated \
                 for degree-3 twists"
            );
        }
    }
    Ok(eta)
}

fn parse_class(
    ring: &CohomologyRing,
    text: &str,
) -> Result<twistcoh::cohomology::Class, CliError> {
    let e = cdgafile::parse_element(&ring.presentation, text).map_err(file_error)?;
    ring.class_of(&e).map_err(math_error)
}

/// Parse a polynomial in x1, x2, ... for the characteristic-class commands.
fn parse_x_poly(text: &str) -> Result<MPoly, CliError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(usage("empty expression"));
    }
    let mut out = MPoly::zero();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let negative = if let Some(r) = rest.strip_prefix('-') {
            rest = r;
            true
        } else {
            rest = rest.strip_prefix('+').unwrap_or(rest);
            false
        };
        let end = rest
            .find(['+', '-'])
            .unwrap_or(rest.len());
        let (term, tail) = rest.split_at(end);
        rest = tail;
        if term.is_empty() {
            return Err(usage("dangling sign in expression"));
        }
        let mut coeff = twistcoh::Scalar::from_integer(1.into());
        let mut mono = MPoly::one();
        for factor in term.split('*') {
            if factor.starts_with(|c: char| c.is_ascii_digit()) {
                coeff *= factor
                    .parse::<twistcoh::Scalar>()
                    .map_err(|_| usage(format!("bad rational `{factor}`")))?;
            } else {
                let (name, power) = match factor.split_once('^') {
                    Some((n, p)) => (
                        n,
                        p.parse::<u32>()
                            .map_err(|_| usage(format!("bad exponent in `{factor}`")))?,
                    ),
                    None => (factor, 1),
                };
                let n: u32 = name
                    .strip_prefix('x')
                    .and_then(|s| s.parse().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| usage(format!("expected a variable x1, x2, ..., got `{name}`")))?;
                mono = mono.mul(&MPoly::var(charclass::xvar(n)).pow(power));
            }
        }
        if negative {
            coeff = -coeff;
        }
        out = out.add(&mono.scale(&coeff));
    }
    Ok(out)
}

fn format_reps(p: &Presentation, reps: &[Element]) -> String {
    reps.iter()
        .map(|e| p.format_element(e))
        .collect::<Vec<_>>()
        .join("; ")
}

fn massey_section(ring: &CohomologyRing, coset: &twisted::MasseyCoset) -> Section {
    let mut s = Section::new(
        "massey product",
        &["representative", "degree", "indeterminacy_dim", "nonzero"],
    );
    s.row(&[
        ring.presentation.format_element(&coset.element),
        coset.class.degree.to_string(),
        coset.indeterminacy.dim().to_string(),
        (!coset.is_zero()).to_string(),
    ]);
    s
}

fn run(cmd: Cmd, _format: Format) -> Result<Option<Report>, CliError> {
    match cmd {
        Cmd::Cohomology { file } => {
            let (f, text) = load(&file)?;
            let ring = compute_cohomology(&f.presentation);
            let mut report = Report::new("cohomology", &text);
            let mut s = Section::new("betti numbers", &["degree", "dim", "representatives"]);
            for (k, b) in ring.betti_vector().iter().enumerate() {
                s.row(&[
                    k.to_string(),
                    b.to_string(),
                    format_reps(&f.presentation, ring.representatives(k as u32)),
                ]);
            }
            s.note(format!("total dimension {}", ring.total_dim()));
            report.push(s);
            Ok(Some(report))
        }
        Cmd::Twisted { file } => {
            let (f, text) = load(&file)?;
            let eta = require_twist(&f)?;
            let tc = twisted::twisted_cohomology(&f.presentation, &eta).map_err(math_error)?;
            let mut report = Report::new("twisted", &text);
            let mut s = Section::new("twisted cohomology", &["parity", "dim", "representatives"]);
            s.row(&[
                "even".into(),
                tc.dim_even.to_string(),
                format_reps(&f.presentation, &tc.reps_even),
            ]);
            s.row(&[
                "odd".into(),
                tc.dim_odd.to_string(),
                format_reps(&f.presentation, &tc.reps_odd),
            ]);
            s.note(format!("total rank {}", tc.total()));
            report.push(s);
            Ok(Some(report))
        }
        Cmd::Ss { file, max_page } => {
            let (f, text) = load(&file)?;
            let eta = require_twist(&f)?;
            let pages =
                twisted::spectral_sequence(&f.presentation, &eta, max_page).map_err(math_error)?;
            let stable = twisted::stable_from(&pages);
            let mut report = Report::new("ss", &text);
            let mut s = Section::new("page totals", &["page", "total", "stable"]);
            for page in &pages {
                let is_stable = stable.map_or(false, |r0| page.r >= r0);
                s.row(&[
                    page.r.to_string(),
                    page.total().to_string(),
                    if is_stable { "yes" } else { "no" }.to_string(),
                ]);
            }
            match stable {
                Some(r0) => s.note(format!("stabilizes at page {r0}")),
                None => s.note(format!("not yet stable by page {max_page}")),
            }
            report.push(s);
            if let Some(last) = pages.last() {
                let mut blocks = Section::new(
                    format!("E_{} blocks", last.r),
                    &["filtration", "dim", "representatives"],
                );
                for b in &last.blocks {
                    blocks.row(&[
                        b.p.to_string(),
                        b.dim.to_string(),
                        format_reps(&f.presentation, &b.representatives),
                    ]);
                }
                report.push(blocks);
            }
            Ok(Some(report))
        }
        Cmd::Massey { file, x, y, z } => {
            let (f, text) = load(&file)?;
            let ring = compute_cohomology(&f.presentation);
            let (cx, cy, cz) = (
                parse_class(&ring, &x)?,
                parse_class(&ring, &y)?,
                parse_class(&ring, &z)?,
            );
            let coset = twisted::massey_triple(&ring, &cx, &cy, &cz).map_err(math_error)?;
            let mut report = Report::new("massey", &text);
            report.push(massey_section(&ring, &coset));
            Ok(Some(report))
        }
        Cmd::MasseyEta { file, class, order } => {
            if order < 1 {
                return Err(usage("--order must be at least 1"));
            }
            let (f, text) = load(&file)?;
            let eta = require_twist(&f)?;
            let ring = compute_cohomology(&f.presentation);
            let cx = parse_class(&ring, &class)?;
            let coset =
                twisted::massey_eta_iterated(&ring, &eta, &cx, order).map_err(math_error)?;
            let mut report = Report::new("massey-eta", &text);
            report.push(massey_section(&ring, &coset));
            Ok(Some(report))
        }
        Cmd::Jring { max_weight } => {
            let ring = charclass::invariant_ring(max_weight);
            let series = charclass::poincare_series(max_weight);
            let surjective = charclass::check_d_surjective(max_weight.max(2));
            let mut report = Report::new("jring", &format!("max_weight={max_weight}"));
            let mut s = Section::new("invariant ring", &["weight", "a_dim", "j_dim", "poincare", "basis"]);
            for w in &ring.weights {
                s.row(&[
                    w.n.to_string(),
                    w.a_dim.to_string(),
                    w.j_dim.to_string(),
                    series[w.n as usize].to_string(),
                    w.basis
                        .iter()
                        .map(charclass::format_poly)
                        .collect::<Vec<_>>()
                        .join("; "),
                ]);
            }
            let series_ok = ring
                .weights
                .iter()
                .all(|w| series[w.n as usize] as usize == w.j_dim);
            s.note(format!(
                "Poincare series cross-check: {}",
                if series_ok { "agrees" } else { "MISMATCH" }
            ));
            s.note(format!(
                "d surjective onto lower weight for 2 <= n <= {}: {}",
                max_weight.max(2),
                surjective.iter().all(|(_, ok)| *ok)
            ));
            report.push(s);
            Ok(Some(report))
        }
        Cmd::Wang { max_weight } => {
            let w = charclass::wang_model_report(max_weight);
            let mut report = Report::new("wang", &format!("max_weight={max_weight}"));
            let mut even = Section::new("even cohomology", &["degree", "dim"]);
            for (n, d) in w.even_dims.iter().enumerate() {
                even.row(&[(2 * n).to_string(), d.to_string()]);
            }
            report.push(even);
            let mut odd = Section::new("odd cohomology", &["degree", "dim"]);
            for (deg, d) in &w.odd_dims {
                odd.row(&[deg.to_string(), d.to_string()]);
            }
            report.push(odd);
            let mut ann = Section::new("annihilation witnesses", &["f", "g with d g = f"]);
            for (f, g) in &w.annihilation_witnesses {
                ann.row(&[charclass::format_poly(f), charclass::format_poly(g)]);
            }
            ann.note(format!(
                "every positive-weight invariant is annihilated: {}",
                w.all_annihilated
            ));
            report.push(ann);
            Ok(Some(report))
        }
        Cmd::Hankel {
            p,
            q,
            verify,
            reparam,
        } => {
            if p * q > 9 {
                return Err(usage("p*q too large for symbolic expansion (keep p*q <= 9)"));
            }
            let mut report = Report::new("hankel", &format!("p={p} q={q}"));
            let mut s = Section::new("hankel", &["item", "value"]);
            s.row(&[
                format!("h_({p},{q})"),
                hankel::format_poly(&hankel::hankel_det(p, q)),
            ]);
            let cs = hankel::series_quotient(p, q, p + q);
            for (i, c) in cs.iter().enumerate() {
                s.row(&[format!("c{}", i + 1), hankel::format_poly(c)]);
            }
            if verify {
                s.row(&[
                    format!("h_({p},{q})(c(a/b)) = R(a,b)"),
                    hankel::verify_maps_to_resultant(p, q).to_string(),
                ]);
                s.row(&[
                    format!("h_({},{})(c(a/b)) = 0", p + 1, q + 1),
                    hankel::verify_vanishing(p, q, p + 1, q + 1).to_string(),
                ]);
            }
            if reparam {
                let rep = hankel::reparam_invariance(p);
                s.row(&[
                    format!("h_({p},{p}) Moebius-invariant"),
                    rep.invariant.to_string(),
                ]);
            }
            report.push(s);
            Ok(Some(report))
        }
        Cmd::Lift { expr, max_weight } => {
            let f = parse_x_poly(&expr)?;
            let lift = charclass::delta_and_lift(&f, max_weight).map_err(math_error)?;
            let mut report = Report::new("lift", &format!("expr={expr} max_weight={max_weight}"));
            let mut s = Section::new("lift", &["item", "value"]);
            s.row(&["input".into(), charclass::format_poly(&f)]);
            s.row(&["word_length".into(), lift.word_length.to_string()]);
            s.row(&["lambda".into(), format_scalar(&lift.lambda)]);
            s.row(&["lift".into(), charclass::format_poly(&lift.lift)]);
            s.row(&["(d-1)(lift) = 0".into(), lift.d_minus_one_zero.to_string()]);
            s.row(&[
                "[d,delta] = word-length".into(),
                lift.commutator_is_word_length.to_string(),
            ]);
            s.note(format!("series truncated at weight {}", lift.truncation_weight));
            report.push(s);
            Ok(Some(report))
        }
        Cmd::Psi { ks } => {
            let max_weight = (ks.len() as u32 + 4).max(6);
            let rep = charclass::psi_monomial_character(&ks, max_weight);
            let mut report = Report::new("psi", &format!("ks={ks:?}"));
            let mut s = Section::new("psi character", &["item", "value"]);
            s.row(&["character".into(), charclass::format_poly(&rep.full)]);
            s.row(&[
                "lowest component".into(),
                charclass::format_poly(&rep.lowest_component),
            ]);
            s.row(&["lowest = (prod k)*x1^l".into(), rep.lowest_matches.to_string()]);
            s.note(format!("truncated at weight {max_weight}"));
            report.push(s);
            Ok(Some(report))
        }
        Cmd::TensorAction { n } => {
            let mut report = Report::new("tensor-action", &format!("n={n}"));
            let mut s = Section::new("tensor action on power sums", &["n", "s_n(u)"]);
            for m in 0..=n {
                s.row(&[
                    m.to_string(),
                    charclass::format_poly(&charclass::tensor_action_power_sums(m)),
                ]);
            }
            report.push(s);
            Ok(Some(report))
        }
        Cmd::Example { name } => {
            let text = cdgafile::example_text(&name).ok_or_else(|| {
                usage(format!(
                    "unknown example `{name}` (available: {})",
                    cdgafile::EXAMPLE_NAMES.join(", ")
                ))
            })?;
            print!("{text}");
            Ok(None)
        }
    }
}
