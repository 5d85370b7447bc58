//! Command-line front end: reproducible analyses of the `u_d` sequences
//! with machine-readable output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::Signed;
use serde_json::json;

use richseq::exponent;
use richseq::factor_index::FactorIndex;
use richseq::richness;
use richseq::spectral;
use richseq::verify::{run_all, VerifySettings};
use richseq::{Morphism, Word};

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum Projection {
    None,
    Pi,
    Sigma,
}

/// Options shared by every verb; flags beat the config file, which beats
/// the built-in defaults.
#[derive(Args, Debug, Clone)]
struct CommonOpts {
    /// Plain key=value config file (d, prefix_length, factor_cap,
    /// chain_depth, root_tol, eigen_tol, limit_tol, format).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Alphabet size.
    #[arg(long, global = true)]
    d: Option<usize>,
    /// Prefix length used for finite analyses.
    #[arg(long = "n", global = true)]
    prefix_length: Option<usize>,
    /// Factor-length cap for the index (prefix_length must be >= 10x this).
    #[arg(long, global = true)]
    factor_cap: Option<usize>,
    /// Depth cap for symbolic chains.
    #[arg(long, global = true)]
    chain_depth: Option<usize>,
    /// Bisection tolerance for the dominant root.
    #[arg(long, global = true)]
    root_tol: Option<f64>,
    /// Tolerance for the eigenvector residual.
    #[arg(long, global = true)]
    eigen_tol: Option<f64>,
    /// Tolerance for limit-formula agreement.
    #[arg(long, global = true)]
    limit_tol: Option<f64>,
    /// Output format.
    #[arg(long, global = true)]
    format: Option<Format>,
}

/// Fully resolved run configuration; deterministic (no seeds).
#[derive(Debug, Clone)]
struct RunConfig {
    d: usize,
    prefix_length: usize,
    factor_cap: usize,
    chain_depth: usize,
    root_tol: f64,
    eigen_tol: f64,
    limit_tol: f64,
    format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            d: 3,
            prefix_length: 100_000,
            factor_cap: 400,
            chain_depth: 80,
            root_tol: 1e-40,
            eigen_tol: 1e-10,
            limit_tol: 1e-8,
            format: Format::Table,
        }
    }
}

impl RunConfig {
    fn resolve(opts: &CommonOpts) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &opts.config {
            cfg.apply_file(path)?;
        }
        if let Some(d) = opts.d {
            cfg.d = d;
        }
        if let Some(n) = opts.prefix_length {
            cfg.prefix_length = n;
        }
        if let Some(cap) = opts.factor_cap {
            cfg.factor_cap = cap;
        }
        if let Some(depth) = opts.chain_depth {
            cfg.chain_depth = depth;
        }
        if let Some(t) = opts.root_tol {
            cfg.root_tol = t;
        }
        if let Some(t) = opts.eigen_tol {
            cfg.eigen_tol = t;
        }
        if let Some(t) = opts.limit_tol {
            cfg.limit_tol = t;
        }
        if let Some(f) = opts.format {
            cfg.format = f;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("{}:{}: expected key=value", path.display(), lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "d" => self.d = value.parse()?,
                "prefix_length" => self.prefix_length = value.parse()?,
                "factor_cap" => self.factor_cap = value.parse()?,
                "chain_depth" => self.chain_depth = value.parse()?,
                "root_tol" => self.root_tol = value.parse()?,
                "eigen_tol" => self.eigen_tol = value.parse()?,
                "limit_tol" => self.limit_tol = value.parse()?,
                "format" => {
                    self.format = match value {
                        "json" => Format::Json,
                        "csv" => Format::Csv,
                        "table" => Format::Table,
                        other => bail!("unknown format {other:?}"),
                    }
                }
                other => bail!("{}: unknown config key {other:?}", path.display()),
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.prefix_length < 10 * self.factor_cap {
            bail!(
                "prefix_length {} must be at least 10 * factor_cap ({})",
                self.prefix_length,
                10 * self.factor_cap
            );
        }
        for (name, t) in [
            ("root_tol", self.root_tol),
            ("eigen_tol", self.eigen_tol),
            ("limit_tol", self.limit_tol),
        ] {
            if !(t > 0.0) {
                bail!("{name} must be positive, got {t}");
            }
        }
        Ok(())
    }

    fn as_json(&self) -> serde_json::Value {
        json!({
            "d": self.d,
            "prefix_length": self.prefix_length,
            "factor_cap": self.factor_cap,
            "chain_depth": self.chain_depth,
            "root_tol": self.root_tol,
            "eigen_tol": self.eigen_tol,
            "limit_tol": self.limit_tol,
        })
    }

    fn as_pairs(&self) -> Vec<(String, String)> {
        vec![
            ("d".into(), self.d.to_string()),
            ("prefix_length".into(), self.prefix_length.to_string()),
            ("factor_cap".into(), self.factor_cap.to_string()),
            ("chain_depth".into(), self.chain_depth.to_string()),
            ("root_tol".into(), format!("{:e}", self.root_tol)),
            ("eigen_tol".into(), format!("{:e}", self.eigen_tol)),
            ("limit_tol".into(), format!("{:e}", self.limit_tol)),
        ]
    }
}

#[derive(Parser, Debug)]
#[command(name = "richseq", about = "Analyses of palindrome-rich morphic sequences")]
struct Cli {
    #[command(flatten)]
    common: CommonOpts,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Write a prefix of u_d (optionally projected) to a file or stdout.
    Generate {
        /// Apply a projection to the generated prefix.
        #[arg(long, value_enum, default_value = "none")]
        project: Projection,
        /// Output file; relative paths land in $RICHSEQ_OUTPUT_DIR if set.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full invariant suite; exit status 0 iff every check passes.
    Verify,
    /// Per-d summary table of spectral data and limits.
    Table {
        /// Inclusive alphabet-size range, e.g. 2..8.
        #[arg(long, default_value = "2..8")]
        d_range: String,
        /// Also compute an empirical exponent estimate from a prefix.
        #[arg(long)]
        estimate: bool,
    },
    /// Bispecial factors of the prefix with bilateral orders.
    Bispecials,
    /// Return-word counts for short factors of the prefix.
    Returns {
        /// Longest factor length to report.
        #[arg(long, default_value_t = 20)]
        max_len: usize,
    },
    /// Palindromic defect of u_d and its images.
    Richness,
    /// Critical exponent of the prefix and the asymptotic estimate ladder.
    Exponent {
        /// Minimum periods for the estimate ladder.
        #[arg(long, value_delimiter = ',', default_value = "1,10,50,100")]
        ladder: Vec<usize>,
    },
    /// Dominant eigenvalue, residuals, and E* for one alphabet size.
    Spectral,
}

/// Simple tabular payload rendered as json, csv, or an aligned table.
struct Report {
    title: String,
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Report {
    fn new(title: &str, headers: &[&str]) -> Report {
        Report {
            title: title.to_string(),
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn render(&self, cfg: &RunConfig) -> String {
        match cfg.format {
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: BTreeMap<&str, &str> = self
                            .headers
                            .iter()
                            .map(String::as_str)
                            .zip(row.iter().map(String::as_str))
                            .collect();
                        json!(map)
                    })
                    .collect();
                let doc = json!({
                    "title": self.title,
                    "config": cfg.as_json(),
                    "rows": rows,
                });
                format!("{:#}", doc)
            }
            Format::Csv => {
                let mut out = String::new();
                let _ = writeln!(out, "{}", self.headers.join(","));
                for row in &self.rows {
                    let _ = writeln!(out, "{}", row.join(","));
                }
                out.trim_end().to_string()
            }
            Format::Table => {
                let mut widths: Vec<usize> = self.headers.iter().map(String::len).collect();
                for row in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.len());
                    }
                }
                let mut out = String::new();
                let _ = writeln!(out, "# {}", self.title);
                for (key, value) in cfg.as_pairs() {
                    let _ = writeln!(out, "# {key} = {value}");
                }
                let line = |cells: &[String], widths: &[usize]| {
                    cells
                        .iter()
                        .zip(widths)
                        .map(|(c, w)| format!("{c:<w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                let _ = writeln!(out, "{}", line(&self.headers, &widths));
                for row in &self.rows {
                    let _ = writeln!(out, "{}", line(row, &widths));
                }
                out.trim_end().to_string()
            }
        }
    }
}

/// Fixed-precision decimal rendering of an exact rational (truncated).
fn decimal(r: &num::BigRational, digits: u32) -> String {
    use num::{BigInt, Signed, Zero};
    let neg = r.is_negative();
    let abs = r.abs();
    let scale = BigInt::from(10u8).pow(digits);
    let scaled = (abs.numer() * &scale) / abs.denom();
    let int = &scaled / &scale;
    let frac = &scaled % &scale;
    let mut s = format!("{int}.{frac:0width$}", width = digits as usize);
    if neg && !scaled.is_zero() {
        s.insert(0, '-');
    }
    s
}

fn rat_from_f64(x: f64) -> Result<num::BigRational> {
    num::BigRational::from_float(x).context("tolerance is not finite")
}

fn u_prefix(d: usize, n: usize) -> Result<Word> {
    Ok(Morphism::phi(d)?.fixed_point_prefix(n)?)
}

/// Digits for alphabets up to 10, comma-separated integers beyond; the
/// binary projection prints a/b.
fn render_word(w: &Word, alphabet: usize, binary_ab: bool) -> String {
    if binary_ab {
        w.letters()
            .iter()
            .map(|&c| if c == 0 { 'a' } else { 'b' })
            .collect()
    } else if alphabet <= 10 {
        w.letters()
            .iter()
            .map(|&c| char::from_digit(c as u32, 10).unwrap())
            .collect()
    } else {
        w.letters()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn cmd_generate(cfg: &RunConfig, project: Projection, out: Option<&Path>) -> Result<String> {
    let u = u_prefix(cfg.d, cfg.prefix_length)?;
    let (word, alphabet, ab) = match project {
        Projection::None => (u, cfg.d, false),
        Projection::Pi => (Morphism::pi(cfg.d)?.apply(&u)?, 2, true),
        Projection::Sigma => (Morphism::sigma(cfg.d)?.apply(&u)?, cfg.d + 1, false),
    };
    let text = render_word(&word, alphabet, ab);
    if let Some(path) = out {
        let path = match std::env::var_os("RICHSEQ_OUTPUT_DIR") {
            Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
            _ => path.to_path_buf(),
        };
        std::fs::write(&path, text.as_bytes())
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(format!("wrote {} letters to {}", word.len(), path.display()))
    } else {
        Ok(text)
    }
}

fn cmd_verify(cfg: &RunConfig) -> Result<(String, bool)> {
    let settings = VerifySettings {
        d: cfg.d,
        prefix_len: cfg.prefix_length,
        factor_cap: cfg.factor_cap,
        chain_cap: cfg.chain_depth.max(1),
    };
    let checks = run_all(&settings)?;
    let all_passed = checks.iter().all(|c| c.passed);
    let mut report = Report::new("verify", &["check", "status", "detail"]);
    for c in &checks {
        report.push(vec![
            c.name.clone(),
            if c.passed { "pass" } else { "FAIL" }.to_string(),
            c.detail.clone(),
        ]);
    }
    Ok((report.render(cfg), all_passed))
}

fn parse_range(spec: &str) -> Result<(usize, usize)> {
    let (lo, hi) = spec
        .split_once("..")
        .with_context(|| format!("range {spec:?} must look like 2..8"))?;
    let lo: usize = lo.trim().parse()?;
    let hi: usize = hi.trim().parse()?;
    if !(2..=64).contains(&lo) || !(2..=64).contains(&hi) || lo > hi {
        bail!("range must satisfy 2 <= lo <= hi <= 64");
    }
    Ok((lo, hi))
}

fn cmd_table(cfg: &RunConfig, d_range: &str, estimate: bool) -> Result<String> {
    let (lo, hi) = parse_range(d_range)?;
    let tol = rat_from_f64(cfg.root_tol)?;
    let mut headers = vec!["d", "lambda", "residual", "e_star", "limit_min", "limit_max"];
    if estimate {
        headers.push("estimate");
    }
    let mut report = Report::new("per-alphabet summary", &headers);
    for d in lo..=hi {
        let lambda = spectral::dominant_root(d, &tol)?;
        let residual = spectral::lambda_residual(d, &lambda);
        let e_star = spectral::e_star_from_lambda(&lambda);
        let (lmin, lmax) = if d >= 3 {
            let mut min: Option<num::BigRational> = None;
            let mut max: Option<num::BigRational> = None;
            for k in 0..d {
                let (l, lt) = spectral::family_limits(d, k, &lambda)?;
                for v in [l, lt] {
                    min = Some(min.map_or(v.clone(), |m| m.min(v.clone())));
                    max = Some(max.map_or(v.clone(), |m| m.max(v)));
                }
            }
            (decimal(&min.unwrap(), 10), decimal(&max.unwrap(), 10))
        } else {
            ("-".to_string(), "-".to_string())
        };
        let mut row = vec![
            d.to_string(),
            decimal(&lambda, 12),
            decimal(&residual.abs(), 15),
            decimal(&e_star, 10),
            lmin,
            lmax,
        ];
        if estimate {
            let prefix = u_prefix(d, cfg.prefix_length)?;
            let est = exponent::asymptotic_exponent_estimate(&prefix, 50)
                .map(|e| format!("{:.6}", *e.numer() as f64 / *e.denom() as f64))
                .unwrap_or_else(|| "-".to_string());
            row.push(est);
        }
        report.push(row);
    }
    Ok(report.render(cfg))
}

fn cmd_bispecials(cfg: &RunConfig) -> Result<String> {
    let u = u_prefix(cfg.d, cfg.prefix_length)?;
    let idx = FactorIndex::build(&u, cfg.factor_cap)?;
    let mut report = Report::new(
        "bispecial factors",
        &["factor", "length", "bilateral_order", "left", "right", "palindrome"],
    );
    for rec in idx.bispecial_records() {
        if rec.factor.len() > idx.trusted_horizon() {
            continue;
        }
        report.push(vec![
            render_word(&rec.factor, cfg.d, false),
            rec.factor.len().to_string(),
            rec.bilateral_order().to_string(),
            rec.lext.len().to_string(),
            rec.rext.len().to_string(),
            rec.factor.is_palindrome().to_string(),
        ]);
    }
    Ok(report.render(cfg))
}

fn cmd_returns(cfg: &RunConfig, max_len: usize) -> Result<String> {
    let u = u_prefix(cfg.d, cfg.prefix_length)?;
    let idx = FactorIndex::build(&u, cfg.factor_cap)?;
    let horizon = max_len.min(idx.trusted_horizon());
    let counts = idx.return_word_counts(horizon)?;
    let mut report = Report::new("return-word counts", &["factor", "length", "returns"]);
    for (f, c) in counts {
        report.push(vec![
            render_word(&f, cfg.d, false),
            f.len().to_string(),
            c.to_string(),
        ]);
    }
    Ok(report.render(cfg))
}

fn cmd_richness(cfg: &RunConfig) -> Result<String> {
    let u = u_prefix(cfg.d, cfg.prefix_length)?;
    let pi = Morphism::pi(cfg.d)?.apply(&u)?;
    let sigma = Morphism::sigma(cfg.d)?.apply(&u)?;
    let mut report = Report::new(
        "palindromic richness",
        &["word", "length", "palindromes", "defect", "rich"],
    );
    for (name, w) in [("u", &u), ("pi(u)", &pi), ("sigma(u)", &sigma)] {
        let census = richness::palindrome_census(w);
        report.push(vec![
            name.to_string(),
            w.len().to_string(),
            census.distinct_palindromes().to_string(),
            census.defect().to_string(),
            (census.defect() == 0).to_string(),
        ]);
    }
    Ok(report.render(cfg))
}

fn cmd_exponent(cfg: &RunConfig, ladder: &[usize]) -> Result<String> {
    let u = u_prefix(cfg.d, cfg.prefix_length)?;
    let mut report = Report::new(
        "repetition exponents",
        &["min_period", "max_exponent", "decimal"],
    );
    let crit = exponent::critical_exponent_prefix(&u);
    report.push(vec![
        "0 (critical)".to_string(),
        format!("{}/{}", crit.numer(), crit.denom()),
        format!("{:.6}", *crit.numer() as f64 / *crit.denom() as f64),
    ]);
    for (m, e) in exponent::estimate_curve(&u, ladder) {
        report.push(vec![
            m.to_string(),
            format!("{}/{}", e.numer(), e.denom()),
            format!("{:.6}", *e.numer() as f64 / *e.denom() as f64),
        ]);
    }
    Ok(report.render(cfg))
}

fn cmd_spectral(cfg: &RunConfig) -> Result<String> {
    let tol = rat_from_f64(cfg.root_tol)?;
    let data = spectral::SpectralData::compute(cfg.d, &tol)?;
    let residual = spectral::lambda_residual(cfg.d, &data.lambda);
    let eigen = spectral::eigen_residual(cfg.d, &data.z, &data.lambda)?;
    let e_star = spectral::e_star_from_lambda(&data.lambda);
    let poly_ok = spectral::CharPoly::new(cfg.d)?.factorization_identity_holds();
    let mut report = Report::new("spectral data", &["quantity", "value"]);
    report.push(vec!["lambda".into(), decimal(&data.lambda, 30)]);
    report.push(vec!["root_residual".into(), decimal(&residual.abs(), 45)]);
    report.push(vec!["eigen_residual".into(), decimal(&eigen, 45)]);
    report.push(vec!["e_star".into(), decimal(&e_star, 30)]);
    report.push(vec!["charpoly_identity".into(), poly_ok.to_string()]);
    Ok(report.render(cfg))
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    let cfg = RunConfig::resolve(&cli.common)?;
    let (output, ok) = match &cli.verb {
        Verb::Generate { project, out } => (cmd_generate(&cfg, *project, out.as_deref())?, true),
        Verb::Verify => cmd_verify(&cfg)?,
        Verb::Table { d_range, estimate } => (cmd_table(&cfg, d_range, *estimate)?, true),
        Verb::Bispecials => (cmd_bispecials(&cfg)?, true),
        Verb::Returns { max_len } => (cmd_returns(&cfg, *max_len)?, true),
        Verb::Richness => (cmd_richness(&cfg)?, true),
        Verb::Exponent { ladder } => (cmd_exponent(&cfg, ladder)?, true),
        Verb::Spectral => (cmd_spectral(&cfg)?, true),
    };
    use std::io::Write as _;
    let mut stdout = std::io::stdout().lock();
    if let Err(err) = writeln!(stdout, "{output}") {
        // a closed pipe (e.g. `richseq table | head`) is not an error
        if err.kind() != std::io::ErrorKind::BrokenPipe {
            return Err(err.into());
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_precedence_and_validation() {
        let dir = std::env::temp_dir().join("richseq-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "# comment\nd = 4\nfactor_cap = 50\nformat = csv\n").unwrap();
        let opts = CommonOpts {
            config: Some(path.clone()),
            d: Some(5),
            prefix_length: None,
            factor_cap: None,
            chain_depth: None,
            root_tol: None,
            eigen_tol: None,
            limit_tol: None,
            format: None,
        };
        let cfg = RunConfig::resolve(&opts).unwrap();
        assert_eq!(cfg.d, 5, "flag beats config file");
        assert_eq!(cfg.factor_cap, 50, "config file beats default");
        assert_eq!(cfg.format, Format::Csv);

        std::fs::write(&path, "prefix_length = 10\n").unwrap();
        let opts = CommonOpts {
            config: Some(path),
            d: None,
            prefix_length: None,
            factor_cap: None,
            chain_depth: None,
            root_tol: None,
            eigen_tol: None,
            limit_tol: None,
            format: None,
        };
        assert!(RunConfig::resolve(&opts).is_err(), "horizon invariant");
    }

    #[test]
    fn word_rendering() {
        let w = Word::parse("0120").unwrap();
        assert_eq!(render_word(&w, 3, false), "0120");
        assert_eq!(render_word(&Word::parse("0110").unwrap(), 2, true), "abba");
        let big = Word::new(vec![0, 11, 3]);
        assert_eq!(render_word(&big, 12, false), "0,11,3");
    }

    #[test]
    fn decimal_rendering() {
        use num::BigRational;
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(decimal(&half, 4), "0.5000");
        let third = BigRational::new((-1).into(), 3.into());
        assert_eq!(decimal(&third, 3), "-0.333");
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("2..8").unwrap(), (2, 8));
        assert!(parse_range("8..2").is_err());
        assert!(parse_range("1..5").is_err());
        assert!(parse_range("3").is_err());
    }
}
