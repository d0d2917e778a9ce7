use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use orepoly::harness::trial_rng;
use orepoly::hfe::{default_bound, run_scenario};
use orepoly::serial::{from_json, to_json, DoFile, FieldFile, KeyFile, PolyFile};
use orepoly::{
    attack_gcldf, decompose_complete, estimate_split_success, gcldf_lin, hfe_decrypt, hfe_encrypt,
    hfe_keygen, phi_inv, phi_map, FieldCtx, FqElem, LinPoly,
};

const DEFAULT_MAX_Q: u64 = 1 << 16;
const DEFAULT_MAX_ROUNDS: usize = 16;

#[derive(Parser)]
#[command(name = "orepoly", version, about = "Linearized polynomial decomposition and a toy HFE attack")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Validate a field file and print it in normal form
    Field {
        #[arg(long)]
        field: PathBuf,
    },
    /// Completely decompose a p^s-polynomial under composition
    Decompose {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Greatest common left decomposition factor of two or more p^s-polynomials
    Gcldf {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, required = true, num_args = 1)]
        poly: Vec<PathBuf>,
    },
    /// Generate an HFE key pair
    Keygen {
        #[arg(long)]
        field: PathBuf,
        /// Degree bound on the secret polynomial (default p^4)
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Encrypt one field element given as a digit array
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[command(flatten)]
        input: InputArg,
    },
    /// Decrypt one ciphertext with the secret key; prints every preimage
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[command(flatten)]
        input: InputArg,
    },
    /// Recover an equivalent secret key from a public key, or run a seeded
    /// batch of keygen and attack with --instances
    Attack(AttackArgs),
    /// Estimate the first-try success rate of the zero-divisor search
    Probe {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct InputArg {
    /// JSON file holding the digit array; read from stdin when absent
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    /// Public key (a full key file also works)
    #[arg(long, required_unless_present = "instances", conflicts_with = "instances")]
    key: Option<PathBuf>,
    #[arg(long, requires = "field")]
    instances: Option<usize>,
    #[arg(long)]
    field: Option<PathBuf>,
    /// Degree bound (default p^4)
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    max_rounds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Usage(String),
    Domain(orepoly::Error),
}

impl From<orepoly::Error> for Failure {
    fn from(err: orepoly::Error) -> Self {
        match err {
            orepoly::Error::Parse { .. } => Failure::Usage(err.to_string()),
            other => Failure::Domain(other),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_input(input: &InputArg) -> CliResult<String> {
    match &input.input {
        Some(path) => read_text(path),
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
            Ok(text)
        }
    }
}

fn max_q() -> CliResult<u64> {
    match std::env::var("TOOL_POLICY_MAX_Q") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("TOOL_POLICY_MAX_Q: not an integer: {v}"))),
        Err(_) => Ok(DEFAULT_MAX_Q),
    }
}

fn check_policy(f: &FieldFile) -> CliResult<()> {
    let bound = max_q()?;
    let order = (f.p as u64).checked_pow(f.e as u32).unwrap_or(u64::MAX);
    if order > bound {
        return Err(orepoly::Error::PolicyBound { order, bound }.into());
    }
    Ok(())
}

fn load_field(path: &Path) -> CliResult<FieldCtx> {
    let file: FieldFile = from_json(&read_text(path)?)?;
    check_policy(&file)?;
    Ok(file.to_ctx()?)
}

fn load_key(path: &Path) -> CliResult<KeyFile> {
    let key: KeyFile = from_json(&read_text(path)?)?;
    check_policy(&key.public.field)?;
    Ok(key)
}

fn load_lin(path: &Path, ctx: &FieldCtx) -> CliResult<LinPoly> {
    let file: PolyFile = from_json(&read_text(path)?)?;
    Ok(file.to_lin(ctx)?)
}

fn load_element(input: &InputArg, ctx: &FieldCtx) -> CliResult<FqElem> {
    let digits: Vec<u32> = from_json(&read_input(input)?)?;
    Ok(ctx.from_digits(&digits)?)
}

#[derive(Serialize)]
struct FieldOut {
    #[serde(flatten)]
    field: FieldFile,
    order: u32,
}

#[derive(Serialize)]
struct DecomposeOut {
    /// Outermost factor first: the input equals factors[0] ∘ factors[1] ∘ ...
    factors: Vec<PolyFile>,
    certified: bool,
}

#[derive(Serialize)]
struct GcldfOut {
    gcldf: PolyFile,
    /// cofactors[i] satisfies gcldf ∘ cofactors[i] = input i.
    cofactors: Vec<PolyFile>,
}

#[derive(Serialize)]
struct DecryptOut {
    candidates: Vec<Vec<u32>>,
}

#[derive(Serialize)]
struct AttackOut {
    left: PolyFile,
    cofactor: DoFile,
    rounds: usize,
    samples: Vec<Vec<u32>>,
}

fn run(verb: Verb) -> CliResult<String> {
    match verb {
        Verb::Field { field } => {
            let ctx = load_field(&field)?;
            Ok(to_json(&FieldOut { field: FieldFile::from_ctx(&ctx), order: ctx.order() }))
        }
        Verb::Decompose { field, poly, seed } => {
            let ctx = load_field(&field)?;
            let l = load_lin(&poly, &ctx)?;
            let d = decompose_complete(&phi_map(&l), &mut trial_rng(seed, 0))?;
            let mut factors: Vec<LinPoly> = d.factors.iter().map(phi_inv).collect();
            match factors.first_mut() {
                Some(first) => *first = phi_inv(&d.factors[0].scale_left(d.unit)),
                None => factors.push(l),
            }
            Ok(to_json(&DecomposeOut {
                factors: factors.iter().map(PolyFile::from_lin).collect(),
                certified: d.certified,
            }))
        }
        Verb::Gcldf { field, poly } => {
            let ctx = load_field(&field)?;
            let polys = poly.iter().map(|p| load_lin(p, &ctx)).collect::<CliResult<Vec<_>>>()?;
            let mut g = polys[0].clone();
            for q in &polys[1..] {
                g = gcldf_lin(&g, q)?.gcldf;
            }
            // a single input is its own factor, normalized the same way
            if polys.len() == 1 {
                g = gcldf_lin(&g, &g)?.gcldf;
            }
            let cofactors = polys
                .iter()
                .map(|q| Ok(PolyFile::from_lin(&gcldf_lin(&g, q)?.second_cofactor)))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(to_json(&GcldfOut { gcldf: PolyFile::from_lin(&g), cofactors }))
        }
        Verb::Keygen { field, bound, seed } => {
            let ctx = load_field(&field)?;
            let bound = bound.unwrap_or_else(|| default_bound(ctx.p()));
            let kp = hfe_keygen(&ctx, bound, &mut trial_rng(seed, 0))?;
            Ok(to_json(&KeyFile::from_pair(&kp)))
        }
        Verb::Encrypt { key, input } => {
            let public = load_key(&key)?.public.to_key()?;
            let m = load_element(&input, public.ctx())?;
            Ok(to_json(&public.ctx().digits(hfe_encrypt(&public, m))))
        }
        Verb::Decrypt { key, input } => {
            let kp = load_key(&key)?.to_pair()?;
            let ctx = kp.public.ctx();
            let y = load_element(&input, ctx)?;
            let candidates = hfe_decrypt(&kp.secret, y).into_iter().map(|m| ctx.digits(m)).collect();
            Ok(to_json(&DecryptOut { candidates }))
        }
        Verb::Attack(args) => attack(args),
        Verb::Probe { field, degree, trials, seed } => {
            let ctx = load_field(&field)?;
            Ok(to_json(&estimate_split_success(&ctx, 1, degree, trials, seed)?))
        }
    }
}

fn attack(args: AttackArgs) -> CliResult<String> {
    if let Some(instances) = args.instances {
        let ctx = load_field(args.field.as_deref().expect("clap enforces --field"))?;
        let bound = args.bound.unwrap_or_else(|| default_bound(ctx.p()));
        return Ok(to_json(&run_scenario(&ctx, bound, instances, args.seed, args.max_rounds)?));
    }
    let public = load_key(args.key.as_deref().expect("clap enforces --key"))?.public.to_key()?;
    let ctx = public.ctx();
    let bound = args.bound.unwrap_or_else(|| default_bound(ctx.p()));
    let rec = attack_gcldf(&public.e_poly, bound, &mut trial_rng(args.seed, 0), args.max_rounds)?;
    Ok(to_json(&AttackOut {
        left: PolyFile::from_lin(&rec.left),
        cofactor: DoFile::from_do(&rec.cofactor),
        rounds: rec.rounds,
        samples: rec.samples.iter().map(|&a| ctx.digits(a)).collect(),
    }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.verb) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
