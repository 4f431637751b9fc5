//! File-based front door. Every subcommand is deterministic given its
//! flags and seed, outputs are written atomically (temp file + rename),
//! and exit codes distinguish usage errors (1), operation failures such
//! as a missing witness or a failed attack (2), and malformed input
//! files (3).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::attack::{attack_clt, attack_crt_acd, CrtAcdInstance};
use crate::clt::{instance_gen, SymmetricPublicEncodings};
use crate::exact_cover::{ExactCoverInstance, Witness, DEFAULT_NODE_LIMIT};
use crate::format::{to_hex, FormatError};
use crate::params::{attack_demo_params, derive_params};
use crate::reductions::{parse_pentomino, parse_sudoku, pentomino_to_cover, sudoku_to_cover, sudoku_witness};
use crate::witness_enc::{decrypt, encrypt_with_secrets, Ciphertext, MessageBits};

#[derive(Parser)]
#[command(name = "cltwe", version, about = "Witness encryption for Exact Cover, with reductions and a zeroizing attack demo")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a puzzle file to an Exact Cover instance.
    Reduce {
        #[command(subcommand)]
        kind: ReduceKind,
    },
    /// Find an exact cover of an instance (Algorithm X).
    Solve {
        /// Exact Cover instance file.
        cover: PathBuf,
        /// Search node budget before giving up.
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        limit: u64,
        /// Write the witness here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Encrypt a message against an Exact Cover instance.
    Encrypt {
        /// Exact Cover instance file.
        #[arg(long)]
        cover: PathBuf,
        /// Message as lowercase hex bytes.
        #[arg(long)]
        message_hex: String,
        /// Security parameter (>= 8).
        #[arg(long)]
        lambda: u64,
        /// Encryption seed as hex bytes; same seed, same ciphertext.
        #[arg(long)]
        seed: String,
        /// Ciphertext output path.
        #[arg(short, long)]
        output: PathBuf,
        /// Debug only: also persist the trapdoor to this file.
        #[arg(long)]
        keep_secrets: Option<PathBuf>,
    },
    /// Decrypt a ciphertext with an exact-cover witness.
    Decrypt {
        /// Ciphertext file.
        #[arg(long)]
        ct: PathBuf,
        /// Witness file: one line of space-separated set indices.
        #[arg(long, conflicts_with_all = ["puzzle", "sudoku_solution"])]
        witness: Option<PathBuf>,
        /// Sudoku puzzle the ciphertext's instance was reduced from.
        #[arg(long, requires = "sudoku_solution")]
        puzzle: Option<PathBuf>,
        /// Solved grid for that puzzle; converted to a witness.
        #[arg(long, requires = "puzzle")]
        sudoku_solution: Option<PathBuf>,
        /// Write the recovered message hex here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the zeroizing attack.
    Attack {
        #[command(subcommand)]
        kind: AttackKind,
    },
    /// Print derived parameters and a ciphertext size estimate.
    Params {
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        universe: usize,
        /// Assumed number of subsets in the instance (default 2*universe).
        #[arg(long)]
        sets: Option<usize>,
        /// Assumed message length in bits.
        #[arg(long, default_value_t = 8)]
        bits: usize,
    },
}

#[derive(Subcommand)]
enum ReduceKind {
    /// Sudoku grid file -> Exact Cover.
    Sudoku {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Pentomino board file -> Exact Cover.
    Pentomino {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum AttackKind {
    /// Factor a freshly planted CRT-ACD instance.
    Demo {
        /// Number of planted primes.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Bit length of each prime.
        #[arg(long, default_value_t = 64)]
        eta: u64,
        /// Bit bound on sample residues.
        #[arg(long, default_value_t = 16)]
        eps: u64,
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 10)]
        retries: u32,
    },
    /// Factor the modulus of a symmetric graded-encoding instance.
    Clt {
        /// Published symmetric encodings file; omit to generate one.
        #[arg(long)]
        pp: Option<PathBuf>,
        /// Slots for a generated instance.
        #[arg(long, default_value_t = 4)]
        n_slots: usize,
        /// Multilinearity for a generated instance.
        #[arg(long, default_value_t = 3)]
        kappa: usize,
        /// Seed for a generated instance (hex bytes).
        #[arg(long)]
        seed: Option<String>,
        /// Write the generated public file here before attacking.
        #[arg(long)]
        dump_pp: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    Operation(String),
    Format(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Operation(_) => 2,
            CliError::Format(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Operation(m) | CliError::Format(m) => m,
        }
    }
}

fn format_err(path: &Path, e: FormatError) -> CliError {
    CliError::Format(format!("{}: {e}", path.display()))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Operation(format!("cannot read {}: {e}", path.display())))
}

/// Write via a temp file in the destination directory plus rename, so
/// a crash never leaves a half-written output behind.
fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let fail = |e: &dyn std::fmt::Display| CliError::Operation(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    std::io::Write::write_all(&mut tmp, content.as_bytes()).map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e))?;
    Ok(())
}

fn emit(output: Option<&Path>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => write_atomic(path, content),
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn parse_hex_bytes(s: &str, what: &str) -> Result<Vec<u8>, CliError> {
    let bytes = hex::decode(s).map_err(|e| CliError::Usage(format!("invalid {what} hex: {e}")))?;
    if bytes.is_empty() {
        return Err(CliError::Usage(format!("{what} must not be empty")));
    }
    Ok(bytes)
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Reduce { kind } => reduce(kind),
        Command::Solve { cover, limit, output } => solve(&cover, limit, output.as_deref()),
        Command::Encrypt { cover, message_hex, lambda, seed, output, keep_secrets } => {
            encrypt_cmd(&cover, &message_hex, lambda, &seed, &output, keep_secrets.as_deref())
        }
        Command::Decrypt { ct, witness, puzzle, sudoku_solution, output } => {
            decrypt_cmd(&ct, witness.as_deref(), puzzle.as_deref(), sudoku_solution.as_deref(), output.as_deref())
        }
        Command::Attack { kind } => attack(kind),
        Command::Params { lambda, universe, sets, bits } => params_estimate(lambda, universe, sets, bits),
    }
}

fn reduce(kind: ReduceKind) -> Result<(), CliError> {
    let (input, output, text) = match kind {
        ReduceKind::Sudoku { input, output } => {
            let puzzle = parse_sudoku(&read_file(&input)?).map_err(|e| format_err(&input, e))?;
            let (instance, _map) = sudoku_to_cover(&puzzle);
            (input, output, instance.to_text())
        }
        ReduceKind::Pentomino { input, output } => {
            let board = parse_pentomino(&read_file(&input)?).map_err(|e| format_err(&input, e))?;
            let (instance, _placements) = pentomino_to_cover(&board);
            (input, output, instance.to_text())
        }
    };
    let _ = input;
    write_atomic(&output, &text)
}

fn solve(cover: &Path, limit: u64, output: Option<&Path>) -> Result<(), CliError> {
    let instance = ExactCoverInstance::from_text(&read_file(cover)?).map_err(|e| format_err(cover, e))?;
    let witness = instance
        .solve(limit)
        .map_err(|e| CliError::Operation(e.to_string()))?
        .ok_or_else(|| CliError::Operation("no exact cover exists".into()))?;
    emit(output, &witness.to_text())
}

fn encrypt_cmd(
    cover: &Path,
    message_hex: &str,
    lambda: u64,
    seed: &str,
    output: &Path,
    keep_secrets: Option<&Path>,
) -> Result<(), CliError> {
    let instance = ExactCoverInstance::from_text(&read_file(cover)?).map_err(|e| format_err(cover, e))?;
    let message = MessageBits::from_bytes(&parse_hex_bytes(message_hex, "message")?)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let seed = parse_hex_bytes(seed, "seed")?;
    let (ct, state) = encrypt_with_secrets(&instance, &message, lambda, &seed)
        .map_err(|e| CliError::Operation(e.to_string()))?;
    write_atomic(output, &ct.to_text())?;
    if let Some(path) = keep_secrets {
        let mut dump = String::from("# trapdoor dump - debug only, never publish\n");
        for (i, p) in state.primes.iter().enumerate() {
            let _ = writeln!(dump, "p {i} {}", to_hex(p));
        }
        for (i, g) in state.plaintext_moduli.iter().enumerate() {
            let _ = writeln!(dump, "g {i} {}", to_hex(g));
        }
        for (j, z) in state.z.iter().enumerate() {
            let _ = writeln!(dump, "z {j} {}", to_hex(z));
        }
        for (i, h) in state.h.iter().enumerate() {
            let _ = writeln!(dump, "h {i} {}", to_hex(h));
        }
        write_atomic(path, &dump)?;
    }
    Ok(())
}

fn decrypt_cmd(
    ct_path: &Path,
    witness: Option<&Path>,
    puzzle: Option<&Path>,
    sudoku_solution: Option<&Path>,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let ct = Ciphertext::from_text(&read_file(ct_path)?).map_err(|e| format_err(ct_path, e))?;
    let witness = load_witness(&ct, witness, puzzle, sudoku_solution)?;
    let message = decrypt(&ct, &witness)
        .map_err(|e| CliError::Operation(e.to_string()))?
        .ok_or_else(|| CliError::Operation("witness rejected".into()))?;
    let bytes = message.to_bytes().map_err(|e| CliError::Operation(e.to_string()))?;
    emit(output, &hex::encode(bytes))
}

fn load_witness(
    ct: &Ciphertext,
    witness: Option<&Path>,
    puzzle: Option<&Path>,
    sudoku_solution: Option<&Path>,
) -> Result<Witness, CliError> {
    if let Some(path) = witness {
        return Witness::from_text(&read_file(path)?).map_err(|e| format_err(path, e));
    }
    let (Some(puzzle_path), Some(solution_path)) = (puzzle, sudoku_solution) else {
        return Err(CliError::Usage("decrypt needs --witness, or --puzzle with --sudoku-solution".into()));
    };
    let puzzle = parse_sudoku(&read_file(puzzle_path)?).map_err(|e| format_err(puzzle_path, e))?;
    let solved = parse_sudoku(&read_file(solution_path)?).map_err(|e| format_err(solution_path, e))?;
    let n = solved.side();
    let mut grid = Vec::with_capacity(n);
    for r in 0..n {
        let mut row = Vec::with_capacity(n);
        for c in 0..n {
            row.push(solved.clue(r, c).ok_or_else(|| {
                CliError::Operation(format!("solution grid has a blank at row {r}, column {c}"))
            })?);
        }
        grid.push(row);
    }
    let (instance, cmap) = sudoku_to_cover(&puzzle);
    if instance != ct.instance {
        return Err(CliError::Operation(
            "puzzle does not reduce to the ciphertext's instance".into(),
        ));
    }
    sudoku_witness(&puzzle, &grid, &cmap).map_err(|e| CliError::Operation(e.to_string()))
}

fn attack(kind: AttackKind) -> Result<(), CliError> {
    let start = Instant::now();
    let result = match kind {
        AttackKind::Demo { n, eta, eps, seed, retries } => {
            let seed = parse_hex_bytes(&seed, "seed")?;
            let log_n = usize::BITS as u64 - (n.max(1) as u64 - 1).leading_zeros() as u64;
            if n == 0 || 3 * eps + log_n + 1 >= eta {
                return Err(CliError::Usage(format!(
                    "demo needs n >= 1 and 3*eps + ceil(log2 n) + 1 < eta (got n={n}, eps={eps}, eta={eta})"
                )));
            }
            let mut instance = CrtAcdInstance::generate(n, eta, eps, &seed);
            attack_crt_acd(&mut instance, retries)
        }
        AttackKind::Clt { pp, n_slots, kappa, seed, dump_pp } => {
            let (public, sym, scan_bits) = match pp {
                Some(path) => {
                    let (public, sym, scan_bits) =
                        SymmetricPublicEncodings::from_text(&read_file(&path)?).map_err(|e| format_err(&path, e))?;
                    (public, sym, scan_bits)
                }
                None => {
                    let seed = parse_hex_bytes(seed.as_deref().unwrap_or(""), "seed")
                        .map_err(|_| CliError::Usage("attack clt needs --pp or --seed".into()))?;
                    if n_slots < 1 || kappa < 1 {
                        return Err(CliError::Usage("attack clt needs n-slots >= 1 and kappa >= 1".into()));
                    }
                    let params = attack_demo_params(n_slots, kappa);
                    let (_state, public, sym) = instance_gen(&params, &seed);
                    let sym = sym.expect("attack profile is symmetric");
                    let scan_bits = params.rho + params.alpha + 2;
                    if let Some(path) = dump_pp {
                        write_atomic(&path, &sym.to_text(&public, scan_bits))?;
                    }
                    (public, sym, scan_bits)
                }
            };
            attack_clt(&public, &sym, scan_bits)
        }
    };
    print!("{}", result.report());
    println!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    if !result.succeeded() {
        return Err(CliError::Operation("attack did not recover the factorization".into()));
    }
    Ok(())
}

fn params_estimate(lambda: u64, universe: usize, sets: Option<usize>, bits: usize) -> Result<(), CliError> {
    let params = derive_params(lambda, universe, false).map_err(|e| CliError::Usage(e.to_string()))?;
    let sets = sets.unwrap_or(2 * universe);
    let encoding_bits = params.n_slots as u64 * params.eta;
    let estimate_bits = (sets + bits) as u64 * encoding_bits;
    println!("lambda={} universe={}", params.lambda, params.universe);
    println!(
        "n_p={} eta={} alpha={} rho={} beta={} nu={} degree={}",
        params.n_slots, params.eta, params.alpha, params.rho, params.beta, params.nu, params.degree
    );
    println!("bits per encoding: {encoding_bits}");
    println!(
        "estimated ciphertext ({sets} sets + {bits} message bits): {estimate_bits} bits (~{:.1} KiB)",
        estimate_bits as f64 / 8192.0
    );
    if estimate_bits > 8 * 1024 * 1024 {
        println!("warning: stretch scale - expect slow encryption and large files");
    }
    Ok(())
}
