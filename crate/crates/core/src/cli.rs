//! The `k3real` command-line front end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blocks::{self, Block};
use crate::constructions::{
    verify_certificate, witness_full, witness_polarized, witness_rank_k, WitnessCertificate,
};
use crate::error::Error;
use crate::involution::Involution;
use crate::json::{self, CertificateJson};
use crate::moduli::{moduli_report, ModuliReport};
use crate::obstructions::{obstruction_report, ObstructionReport};
use crate::real_types::{
    catalog, catalog_entry, diagram_constraints, diagram_pairs, real_invariants,
    topological_types, PUBLISHED_CASE_COUNT,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_RANGE: i32 = 4;
pub const EXIT_SEARCH: i32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "k3real", version, about = "Lattice invariants of real K3 surfaces")]
pub struct Cli {
    /// Coefficient bound for the decomposition search.
    #[arg(long, global = true, default_value_t = 3)]
    pub bound: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Seed for randomized corpora.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Galois invariants, admissibility and real topology of an involution.
    Invariants {
        /// Involution JSON file, or `catalog:NAME`.
        input: String,
    },
    /// Checks every catalog entry against its expected invariants.
    Catalog {
        /// Write each entry as `<name>.json` into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Deliberately corrupt the expectation of the first entry.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Builds and verifies a witness sublattice.
    Witness {
        input: String,
        /// Rank of `M`; defaults to the full rank (or `k₀` when polarized).
        #[arg(long)]
        k: Option<usize>,
        /// Polarization as a JSON integer array.
        #[arg(long)]
        l: Option<String>,
    },
    /// Contractibility and cycle-bound obstructions for a class `l`.
    Obstruction {
        input: String,
        #[arg(long)]
        l: String,
    },
    /// Dimensions of the period domain and its strata.
    Moduli {
        input: String,
        #[arg(long)]
        l: Option<String>,
    },
    /// Pairs `(b, λ)` passing the implemented necessary conditions.
    Diagram,
    /// Compares direct and predicted invariants on random block involutions.
    RandomCheck {
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::RangeViolation { .. } => EXIT_RANGE,
            Error::SearchExhausted { .. } => EXIT_SEARCH,
            _ => EXIT_SEMANTIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Output of a successful run: text for stdout and the exit code.
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

type CliResult = std::result::Result<Output, Failure>;

pub fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Invariants { input } => cmd_invariants(cli, &load(input)?),
        Command::Catalog { export, corrupt } => cmd_catalog(cli, export.as_deref(), *corrupt),
        Command::Witness { input, k, l } => {
            let l = l.as_deref().map(parse_l).transpose()?;
            cmd_witness(cli, &load(input)?, *k, l.as_deref())
        }
        Command::Obstruction { input, l } => cmd_obstruction(cli, &load(input)?, &parse_l(l)?),
        Command::Moduli { input, l } => {
            let l = l.as_deref().map(parse_l).transpose()?;
            cmd_moduli(cli, &load(input)?, l.as_deref())
        }
        Command::Diagram => cmd_diagram(cli),
        Command::RandomCheck { count } => cmd_random_check(cli, *count),
    }
}

fn load(input: &str) -> std::result::Result<Involution, Failure> {
    if let Some(name) = input.strip_prefix("catalog:") {
        return catalog_entry(name).map(|e| e.involution()).ok_or_else(|| Failure {
            code: EXIT_PARSE,
            message: format!("no catalog entry named `{name}`"),
        });
    }
    let text = std::fs::read_to_string(input).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("cannot read {input}: {e}"),
    })?;
    Ok(json::parse_involution(&text)?)
}

fn parse_l(text: &str) -> std::result::Result<Vec<BigInt>, Failure> {
    Ok(json::parse_vector(text)?)
}

fn render<T: Serialize>(cli: &Cli, value: &T, table: impl FnOnce() -> String) -> String {
    match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Table => table(),
    }
}

fn ok(stdout: String) -> CliResult {
    Ok(Output {
        stdout,
        code: EXIT_OK,
    })
}

#[derive(Debug, Serialize)]
pub struct InvariantsReport {
    pub b: usize,
    pub lambda: usize,
    pub h1_dim: usize,
    pub h2_dim: usize,
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_components: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_star: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_defect: Option<usize>,
    pub types: Vec<String>,
}

pub fn invariants_report(s: &Involution) -> crate::Result<InvariantsReport> {
    let g = s.galois_invariants()?;
    let admissible = s.lattice().is_k3() && s.k3_admissible()?;
    let mut report = InvariantsReport {
        b: g.b,
        lambda: g.lambda,
        h1_dim: g.h1_dim,
        h2_dim: g.h2_dim,
        admissible,
        num_components: None,
        h1: None,
        h_star: None,
        chi: None,
        m_defect: None,
        types: Vec::new(),
    };
    if admissible {
        let r = real_invariants(g.b, g.lambda)?;
        report.num_components = Some(r.num_components);
        report.h1 = Some(r.h1);
        report.h_star = Some(r.h_star);
        report.chi = Some(r.chi);
        report.m_defect = Some(r.m_defect);
        report.types = topological_types(&r)?.iter().map(|t| t.to_string()).collect();
    }
    Ok(report)
}

fn cmd_invariants(cli: &Cli, s: &Involution) -> CliResult {
    let r = invariants_report(s)?;
    ok(render(cli, &r, || {
        let mut t = String::new();
        let _ = writeln!(t, "b          {}", r.b);
        let _ = writeln!(t, "lambda     {}", r.lambda);
        let _ = writeln!(t, "dim H1     {}", r.h1_dim);
        let _ = writeln!(t, "dim H2     {}", r.h2_dim);
        if !r.admissible {
            let _ = writeln!(t, "not admissible");
            return t;
        }
        let _ = writeln!(t, "admissible");
        let _ = writeln!(t, "components {}", r.num_components.unwrap_or(0));
        let _ = writeln!(t, "h1         {}", r.h1.unwrap_or(0));
        let _ = writeln!(t, "h*         {}", r.h_star.unwrap_or(0));
        let _ = writeln!(t, "chi        {}", r.chi.unwrap_or(0));
        let _ = writeln!(t, "M-defect   {}", r.m_defect.unwrap_or(0));
        let _ = writeln!(t, "types      {}", r.types.join(" | "));
        t
    }))
}

#[derive(Debug, Serialize)]
pub struct CatalogRow {
    pub name: String,
    pub blocks: Vec<Block>,
    pub expected: (usize, usize),
    pub computed: (usize, usize),
    pub h1_dim: usize,
    pub h2_dim: usize,
    pub admissible: bool,
    pub pass: bool,
}

fn cmd_catalog(cli: &Cli, export: Option<&Path>, corrupt: bool) -> CliResult {
    let mut rows = Vec::new();
    for (i, e) in catalog().into_iter().enumerate() {
        let s = e.involution();
        let g = s.galois_invariants()?;
        let mut expected = e.expected_invariants();
        if corrupt && i == 0 {
            expected.lambda += 2;
        }
        let admissible = s.k3_admissible()?;
        if let Some(dir) = export {
            let path = dir.join(format!("{}.json", e.name));
            std::fs::write(&path, json::involution_to_string(&s) + "\n").map_err(|err| Failure {
                code: EXIT_SEMANTIC,
                message: format!("cannot write {}: {err}", path.display()),
            })?;
        }
        rows.push(CatalogRow {
            name: e.name.to_string(),
            blocks: e.blocks.clone(),
            expected: (expected.b, expected.lambda),
            computed: (g.b, g.lambda),
            h1_dim: g.h1_dim,
            h2_dim: g.h2_dim,
            admissible,
            pass: admissible && g == expected,
        });
    }
    let all_pass = rows.iter().all(|r| r.pass);
    let stdout = render(cli, &rows, || {
        let mut t = format!(
            "{:<20} {:>9} {:>9} {:>6} {:>6}  {}\n",
            "name", "expected", "computed", "dimH1", "dimH2", "result"
        );
        for r in &rows {
            let _ = writeln!(
                t,
                "{:<20} {:>9} {:>9} {:>6} {:>6}  {}",
                r.name,
                format!("({},{})", r.expected.0, r.expected.1),
                format!("({},{})", r.computed.0, r.computed.1),
                r.h1_dim,
                r.h2_dim,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
        t
    });
    Ok(Output {
        stdout,
        code: if all_pass { EXIT_OK } else { EXIT_MISMATCH },
    })
}

fn cmd_witness(cli: &Cli, s: &Involution, k: Option<usize>, l: Option<&[BigInt]>) -> CliResult {
    let cert = match (l, k) {
        (Some(l), k) => {
            let k = match k {
                Some(k) => k,
                None => crate::constructions::polarization_k0(s, l)?,
            };
            witness_polarized(s, l, k, cli.bound)?
        }
        (None, Some(k)) => witness_rank_k(s, k, cli.bound)?,
        (None, None) => witness_full(s, cli.bound)?,
    };
    reverify(s, &cert)?;
    let out = CertificateJson::from(&cert);
    ok(render(cli, &out, || {
        let mut t = String::new();
        let _ = writeln!(t, "rank M       {}", out.m_basis.len());
        let _ = writeln!(t, "dim r(M)     {}", out.r_image_dim);
        if let Some(p) = &out.polarization {
            let _ = writeln!(t, "k0           {}", p.k0);
        }
        for (i, row) in out.m_basis.iter().enumerate() {
            let _ = writeln!(t, "m{:<11} {}", i + 1, fmt_vec(row));
        }
        let _ = writeln!(t, "y            {}", fmt_vec(&out.y));
        let _ = writeln!(t, "verified     {}", out.checks.passed());
        t
    }))
}

/// Runs the independent verifier on the certificate as it will be printed.
fn reverify(s: &Involution, cert: &WitnessCertificate) -> crate::Result<()> {
    let l = cert.polarization.as_ref().map(|(l, _)| l.as_slice());
    let l_class = cert.polarization.as_ref().is_some_and(|(_, k0)| *k0 == 1);
    let checks = verify_certificate(
        s.lattice().gram(),
        s.matrix(),
        cert.m.basis(),
        &cert.y,
        cert.r_image_dim,
        l,
        l_class,
    );
    if !checks.passed() || checks != cert.checks {
        return Err(Error::InternalInconsistency(format!(
            "certificate failed re-verification: {checks:?}"
        )));
    }
    Ok(())
}

fn fmt_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn cmd_obstruction(cli: &Cli, s: &Involution, l: &[BigInt]) -> CliResult {
    let r: ObstructionReport = obstruction_report(s, l)?;
    ok(render(cli, &r, || {
        let c = &r.contractibility;
        let mut t = String::new();
        let _ = writeln!(t, "degree       {}", c.degree);
        let _ = writeln!(t, "verdict      {:?}", c.verdict);
        if let Some(x) = &c.membership {
            let _ = writeln!(t, "membership   {}", fmt_vec(x));
        }
        let rules: Vec<String> = c.fired_rules.iter().map(|r| format!("{r:?}")).collect();
        let _ = writeln!(t, "rules        {}", rules.join(", "));
        if let Some(k0) = r.k0 {
            let _ = writeln!(t, "k0           {k0}");
        }
        if let Some(b) = r.han_bound {
            let _ = writeln!(t, "h1_an bound  {b}");
        }
        if let Some(q) = &r.quartic {
            let _ = writeln!(t, "quartic k0   {}", q.k0);
        }
        t
    }))
}

fn cmd_moduli(cli: &Cli, s: &Involution, l: Option<&[BigInt]>) -> CliResult {
    let r: ModuliReport = moduli_report(s, l)?;
    ok(render(cli, &r, || {
        let mut t = format!("dim Omega    {}\n", r.dim_omega);
        if let (Some(d), Some(k0)) = (r.dim_omega_l, r.k0) {
            let _ = writeln!(t, "dim Omega_l  {d}");
            let _ = writeln!(t, "k0           {k0}");
        }
        let _ = writeln!(t, "{:>3} {:>4}  reason", "k", "dim");
        for st in &r.strata {
            let dim = st.dim.map_or("-".to_string(), |d| d.to_string());
            let _ = writeln!(t, "{:>3} {:>4}  {}", st.k, dim, st.reason);
        }
        t
    }))
}

#[derive(Debug, Serialize)]
pub struct DiagramPair {
    pub b: usize,
    pub lambda: usize,
    pub h_star: usize,
    pub chi: i64,
    pub catalog: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct DiagramReport {
    pub constraints: String,
    pub count: usize,
    pub published_count: usize,
    pub delta: i64,
    pub note: String,
    pub catalog_pairs_pass: bool,
    pub pairs: Vec<DiagramPair>,
}

pub fn diagram_report() -> crate::Result<DiagramReport> {
    let cat = catalog();
    let mut pairs = Vec::new();
    for (b, lambda) in diagram_pairs() {
        let r = real_invariants(b, lambda)?;
        pairs.push(DiagramPair {
            b,
            lambda,
            h_star: r.h_star,
            chi: r.chi,
            catalog: cat
                .iter()
                .filter(|e| e.expected == (b, lambda))
                .map(|e| e.name.to_string())
                .collect(),
        });
    }
    let count = pairs.len();
    Ok(DiagramReport {
        constraints: "1 <= b <= 20, lambda <= min(b, 22 - b), b + lambda even".into(),
        count,
        published_count: PUBLISHED_CASE_COUNT,
        delta: count as i64 - PUBLISHED_CASE_COUNT as i64,
        note: "the conditions above are necessary only; the published diagram of realized \
               (h*, chi) pairs has fewer cases, so the surplus pairs are candidates that \
               these conditions do not exclude"
            .into(),
        catalog_pairs_pass: cat.iter().all(|e| diagram_constraints(e.expected.0, e.expected.1)),
        pairs,
    })
}

fn cmd_diagram(cli: &Cli) -> CliResult {
    let r = diagram_report()?;
    let stdout = render(cli, &r, || {
        let mut t = String::new();
        let _ = writeln!(t, "constraints  {}", r.constraints);
        let _ = writeln!(t, "count        {}", r.count);
        let _ = writeln!(t, "published    {}", r.published_count);
        let _ = writeln!(t, "delta        {:+}", r.delta);
        let _ = writeln!(t, "note         {}", r.note);
        let _ = writeln!(t, "catalog      {}", if r.catalog_pairs_pass { "pass" } else { "FAIL" });
        let _ = writeln!(t, "{:>3} {:>6} {:>3} {:>4}  catalog", "b", "lambda", "h*", "chi");
        for p in &r.pairs {
            let _ = writeln!(
                t,
                "{:>3} {:>6} {:>3} {:>4}  {}",
                p.b,
                p.lambda,
                p.h_star,
                p.chi,
                p.catalog.join(", ")
            );
        }
        t
    });
    Ok(Output {
        stdout,
        code: if r.catalog_pairs_pass { EXIT_OK } else { EXIT_MISMATCH },
    })
}

#[derive(Debug, Serialize)]
pub struct RandomCase {
    pub blocks: Vec<Block>,
    pub rank: usize,
    pub expected: (usize, usize),
    pub computed: (usize, usize),
    pub h1_dim: usize,
    pub h2_dim: usize,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct RandomCheckReport {
    pub seed: u64,
    pub count: usize,
    pub passed: usize,
    pub cases: Vec<RandomCase>,
}

pub fn random_check(seed: u64, count: usize) -> crate::Result<RandomCheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(count);
    for _ in 0..count {
        let (blocks, s) = blocks::random_involution(&mut rng, 22)?;
        let expected = blocks::expected(&blocks);
        let g = s.galois_invariants()?;
        let n = s.rank();
        let pass = (g.b, g.lambda) == expected
            && g.h1_dim == n - g.b - g.lambda
            && g.h2_dim == g.b - g.lambda;
        cases.push(RandomCase {
            blocks,
            rank: n,
            expected,
            computed: (g.b, g.lambda),
            h1_dim: g.h1_dim,
            h2_dim: g.h2_dim,
            pass,
        });
    }
    Ok(RandomCheckReport {
        seed,
        count,
        passed: cases.iter().filter(|c| c.pass).count(),
        cases,
    })
}

fn cmd_random_check(cli: &Cli, count: usize) -> CliResult {
    let r = random_check(cli.seed, count)?;
    let stdout = render(cli, &r, || {
        let mut t = format!("seed {}  passed {}/{}\n", r.seed, r.passed, r.count);
        for c in &r.cases {
            let _ = writeln!(
                t,
                "rank {:>2}  expected ({},{})  computed ({},{})  {}",
                c.rank,
                c.expected.0,
                c.expected.1,
                c.computed.0,
                c.computed.1,
                if c.pass { "pass" } else { "FAIL" }
            );
        }
        t
    });
    Ok(Output {
        stdout,
        code: if r.passed == r.count { EXIT_OK } else { EXIT_MISMATCH },
    })
}

