use clap::{Args, Parser, Subcommand};
use qweyl::error::EngineError;
use qweyl::families::{family, FamilyId, FamilyParams};
use qweyl::groupoid::Caps;
use qweyl::report::{analyze, groupoid_dot, parse_input, AnalysisInput, AnalysisOptions};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact Weyl-groupoid, root-system and Poisson-order data for braiding
/// matrices of roots of unity.
#[derive(Parser)]
#[command(name = "qweyl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// cap on the number of groupoid objects (default 4096; NP_CAPS=o,r
    /// overrides both caps)
    #[arg(long)]
    cap_objects: Option<usize>,
    /// cap on the number of roots per object (default 16384)
    #[arg(long)]
    cap_roots: Option<usize>,
    /// budget for the specialization-exponent search (default 20000)
    #[arg(long, default_value_t = 20000)]
    t_budget: usize,
    /// output format
    #[arg(long, default_value = "json")]
    format: String,
    /// include wall-clock timing in the report (breaks byte-stability)
    #[arg(long)]
    timing: bool,
    /// reserved; affects nothing mathematical
    #[arg(long)]
    seed: Option<u64>,
}

impl CommonOpts {
    fn options(&self) -> AnalysisOptions {
        let mut caps = Caps::from_env();
        if let Some(o) = self.cap_objects {
            caps.max_objects = o;
        }
        if let Some(r) = self.cap_roots {
            caps.max_roots_per_object = r;
        }
        AnalysisOptions {
            caps,
            t_budget: self.t_budget,
            timing: self.timing,
        }
    }
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// family row name (e.g. cartan-a, super-a, wk4, br2)
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    theta: Option<usize>,
    #[arg(long = "N")]
    n: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d1: Option<u64>,
    #[arg(long)]
    d3: Option<u64>,
    /// free exponent choice "i,j=t" (1-based, i < j); repeatable
    #[arg(long = "exp")]
    exps: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a braiding file or a family descriptor
    Analyze {
        /// input file in braiding/v1 format (omit when --family is given)
        file: Option<PathBuf>,
        #[command(flatten)]
        fam: FamilyArgs,
        #[command(flatten)]
        common: CommonOpts,
        /// write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze a family over parameter ranges; one report per tuple
    Sweep {
        #[command(flatten)]
        fam: SweepArgs,
        #[command(flatten)]
        common: CommonOpts,
        /// directory for the per-tuple reports
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in invariant suites
    Selftest,
}

#[derive(Args, Clone)]
struct SweepArgs {
    /// family row name
    #[arg(long)]
    family: String,
    /// comma-separated theta values
    #[arg(long, default_value = "")]
    theta: String,
    /// comma-separated N values
    #[arg(long = "N")]
    n: String,
    /// comma-separated k values (super rows)
    #[arg(long, default_value = "")]
    k: String,
    #[arg(long, default_value = "")]
    d1: String,
    #[arg(long, default_value = "")]
    d3: String,
}

fn parse_exps(exps: &[String]) -> Result<Vec<(usize, usize, i64)>, EngineError> {
    let mut out = Vec::new();
    for e in exps {
        let bad = || EngineError::ParseError {
            line: 0,
            msg: format!("bad exponent {e:?}; expected i,j=t"),
        };
        let (idx, v) = e.split_once('=').ok_or_else(bad)?;
        let (i, j) = idx.split_once(',').ok_or_else(bad)?;
        let i: usize = i.trim().parse().map_err(|_| bad())?;
        let j: usize = j.trim().parse().map_err(|_| bad())?;
        let v: i64 = v.trim().parse().map_err(|_| bad())?;
        if i < 1 || j < 1 {
            return Err(bad());
        }
        out.push((i - 1, j - 1, v));
    }
    Ok(out)
}

fn build_input(
    file: &Option<PathBuf>,
    fam: &FamilyArgs,
) -> Result<AnalysisInput, EngineError> {
    if let Some(name) = &fam.family {
        let id = FamilyId::from_name(name).ok_or_else(|| {
            EngineError::UnsupportedParameters(format!("unknown family {name:?}"))
        })?;
        let params = FamilyParams {
            theta: fam.theta.unwrap_or(0),
            n: fam.n.unwrap_or(0),
            k: fam.k,
            d1: fam.d1,
            d3: fam.d3,
        };
        let exps = parse_exps(&fam.exps)?;
        return Ok(AnalysisInput::Family { id, params, exps });
    }
    let path = file.as_ref().ok_or_else(|| {
        EngineError::UnsupportedParameters("provide an input file or --family".into())
    })?;
    let text = std::fs::read_to_string(path)?;
    parse_input(&text)
}

fn run_analyze(
    file: &Option<PathBuf>,
    fam: &FamilyArgs,
    common: &CommonOpts,
    out: &Option<PathBuf>,
) -> i32 {
    let input = match build_input(file, fam) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let opts = common.options();
    if common.format == "dot" {
        return match groupoid_dot(&input, &opts) {
            Ok(s) => {
                print!("{s}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        };
    }
    match analyze(&input, &opts) {
        Ok(report) => {
            let text = match common.format.as_str() {
                "text" => report.to_text(),
                _ => report.to_json(),
            };
            match out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &text) {
                        eprintln!("error: {e}");
                        return 1;
                    }
                }
                None => println!("{text}"),
            }
            if !report.centrality.pass {
                eprintln!("centrality condition violated; see report");
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Vec<T> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .filter_map(|x| x.trim().parse().ok())
        .collect()
}

fn run_sweep(fam: &SweepArgs, common: &CommonOpts, out: &Option<PathBuf>) -> i32 {
    let Some(id) = FamilyId::from_name(&fam.family) else {
        eprintln!("error: unknown family {:?}", fam.family);
        return 1;
    };
    let thetas: Vec<usize> = parse_list(&fam.theta);
    let ns: Vec<u64> = parse_list(&fam.n);
    let ks: Vec<usize> = parse_list(&fam.k);
    let d1s: Vec<u64> = parse_list(&fam.d1);
    let d3s: Vec<u64> = parse_list(&fam.d3);
    let one = |v: &Vec<usize>| -> Vec<Option<usize>> {
        if v.is_empty() {
            vec![None]
        } else {
            v.iter().map(|&x| Some(x)).collect()
        }
    };
    let one64 = |v: &Vec<u64>| -> Vec<Option<u64>> {
        if v.is_empty() {
            vec![None]
        } else {
            v.iter().map(|&x| Some(x)).collect()
        }
    };
    if let Some(dir) = out {
        let _ = std::fs::create_dir_all(dir);
    }
    println!("family\ttheta\tN\tk\td1\td3\tstatus\ttype\tweyl_order\tnondegenerate\tcentrality");
    let opts = common.options();
    let mut worst = 0;
    for &theta in if thetas.is_empty() { &[0usize][..] } else { &thetas } {
        for &n in &ns {
            for k in one(&ks) {
                for d1 in one64(&d1s) {
                    for d3 in one64(&d3s) {
                        let params = FamilyParams {
                            theta,
                            n,
                            k,
                            d1,
                            d3,
                        };
                        if family(id, &params, &[]).is_err() {
                            // inadmissible tuple; skip silently so ranges can
                            // be given loosely
                            continue;
                        }
                        let input = AnalysisInput::Family {
                            id,
                            params,
                            exps: vec![],
                        };
                        let row_params = format!(
                            "{}\t{}\t{}\t{}\t{}",
                            theta,
                            n,
                            k.map_or("-".into(), |v| v.to_string()),
                            d1.map_or("-".into(), |v| v.to_string()),
                            d3.map_or("-".into(), |v| v.to_string()),
                        );
                        match analyze(&input, &opts) {
                            Ok(rep) => {
                                let nd = rep
                                    .poisson
                                    .as_ref()
                                    .map_or("-".into(), |p| p.nondegenerate.to_string());
                                println!(
                                    "{}\t{}\tok\t{}\t{}\t{}\t{}",
                                    id.name(),
                                    row_params,
                                    rep.cartan.type_name,
                                    rep.cartan.weyl_order,
                                    nd,
                                    rep.centrality.pass
                                );
                                if let Some(dir) = out {
                                    let fname = format!(
                                        "{}_t{}_N{}{}{}{}.json",
                                        id.name(),
                                        theta,
                                        n,
                                        k.map_or(String::new(), |v| format!("_k{v}")),
                                        d1.map_or(String::new(), |v| format!("_d1-{v}")),
                                        d3.map_or(String::new(), |v| format!("_d3-{v}")),
                                    );
                                    let _ = std::fs::write(dir.join(fname), rep.to_json());
                                }
                                worst = worst.max(rep.exit_code());
                            }
                            Err(e) => {
                                println!(
                                    "{}\t{}\terror\t{}\t-\t-\t-",
                                    id.name(),
                                    row_params,
                                    e
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}

fn run_selftest() -> i32 {
    let mut ok = true;
    let mut check = |name: &str, pass: bool| {
        println!("[selftest] {name}: {}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    };

    // reflection involution and equivariance on catalog samples
    let samples = [
        (FamilyId::CartanA, FamilyParams { theta: 2, n: 5, ..Default::default() }),
        (FamilyId::Wk4, FamilyParams { theta: 4, n: 5, ..Default::default() }),
        (FamilyId::Br2, FamilyParams { theta: 2, n: 5, ..Default::default() }),
        (
            FamilyId::SuperA,
            FamilyParams { theta: 2, n: 5, k: Some(1), ..Default::default() },
        ),
    ];
    for (id, params) in samples {
        let input = AnalysisInput::Family {
            id,
            params,
            exps: vec![],
        };
        match analyze(&input, &AnalysisOptions::default()) {
            Ok(rep) => {
                check(
                    &format!("{} analyzes, centrality holds", id.name()),
                    rep.centrality.pass,
                );
                if let Some(p) = rep.poisson {
                    check(
                        &format!("{} phi equivariance", id.name()),
                        p.equivariance_ok,
                    );
                    check(&format!("{} nondegenerate", id.name()), p.nondegenerate);
                }
            }
            Err(e) => {
                check(&format!("{} analyzes ({e})", id.name()), false);
            }
        }
    }
    if ok {
        0
    } else {
        4
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Analyze {
            file,
            fam,
            common,
            out,
        } => run_analyze(file, fam, common, out),
        Command::Sweep { fam, common, out } => run_sweep(fam, common, out),
        Command::Selftest => run_selftest(),
    };
    ExitCode::from(code as u8)
}
