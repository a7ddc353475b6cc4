//! `mixcode attack`: distill an eavesdropped transcript into an LPN
//! instance, report its statistics, and optionally brute-force the key.

use crate::fail::Failure;
use crate::fileio::{load_ecc, load_state_matrix, read_bits, read_matrix, write_text};
use crate::manifest::RunManifest;
use mixcode::attack::{
    brute_force_recover, eliminate_randomness, empirical_noise, CpaTranscript,
    Error as AttackError,
};
use mixcode::channel::{records_from_text, PlaintextSource};
use serde_json::json;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct Args {
    /// Record file captured from a zero-plaintext session.
    #[arg(long)]
    transcript: PathBuf,
    /// Mixing matrix file used by the transmitter.
    #[arg(long)]
    code: PathBuf,
    /// Error-correcting code: `hamming74` or a generator matrix file.
    #[arg(long, default_value = "hamming74")]
    ecc: String,
    /// State matrix file.
    #[arg(long, conflicts_with = "s_seed", required_unless_present = "s_seed")]
    s: Option<PathBuf>,
    /// Derive the state matrix from this seed instead.
    #[arg(long)]
    s_seed: Option<u64>,
    /// True key file: reports the empirical noise rate against it.
    #[arg(long)]
    true_key: Option<PathBuf>,
    /// Brute-force the key (feasible for short keys only).
    #[arg(long)]
    recover: bool,
    /// Write the distilled instance as CSV to this path.
    #[arg(long)]
    export: Option<PathBuf>,
    /// Directory for the run manifest.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

pub fn run(args: Args) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.transcript)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.transcript.display())))?;
    let (meta, records) = records_from_text(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.transcript.display())))?;
    if meta.mode != PlaintextSource::Zero {
        return Err(Failure::Input(
            "transcript must come from a zero-plaintext session".to_string(),
        ));
    }

    let g_h = read_matrix(&args.code)?;
    let ecc = load_ecc(&args.ecc)?;
    if g_h.rows() != meta.m || g_h.cols() != meta.m || ecc.message_len() != meta.m {
        return Err(Failure::Input(format!(
            "transcript expects a {}x{} mixing matrix over a {}-message ECC",
            meta.m, meta.m, meta.m
        )));
    }
    if ecc.codeword_len() != meta.n {
        return Err(Failure::Input(format!(
            "transcript expects codeword length {}, ECC has {}",
            meta.n,
            ecc.codeword_len()
        )));
    }
    let g = g_h.mat_mul(ecc.generator());
    let s = load_state_matrix(args.s.as_ref(), args.s_seed, meta.n)?;

    let transcript = CpaTranscript::from_records(&records, g, s, meta.p)
        .map_err(|e| Failure::Input(e.to_string()))?;
    let instance = eliminate_randomness(&transcript, meta.l);

    println!("samples: {}", instance.tau);
    println!("equations: {}", instance.rows.len());
    println!("epsilon_bound: {}", instance.epsilon_bound);
    if !instance.degenerate_ts.is_empty() {
        println!("degenerate_samples: {}", instance.degenerate_ts.len());
    }
    if let Some(path) = &args.true_key {
        let key = read_bits(path, instance.n)?;
        println!("empirical_noise: {}", empirical_noise(&instance, &key));
    }
    if args.recover {
        let (key, agreement) = brute_force_recover(&instance).map_err(|e| match e {
            AttackError::TooLarge { .. } => Failure::Resource(e.to_string()),
            other => Failure::Input(other.to_string()),
        })?;
        println!("recovered_key: {key}");
        println!("agreement: {agreement}");
    }
    if let Some(path) = &args.export {
        write_text(path, &instance.to_csv())?;
    }

    std::fs::create_dir_all(&args.out)?;
    RunManifest::new(
        "attack",
        json!({
            "n": meta.n,
            "m": meta.m,
            "l": meta.l,
            "p": meta.p,
            "transcript": args.transcript,
            "code": args.code,
            "ecc": args.ecc,
            "s": args.s,
            "s_seed": args.s_seed,
            "true_key": args.true_key,
            "recover": args.recover,
            "export": args.export,
            "out": args.out,
        }),
    )
    .write(&args.out)
}
