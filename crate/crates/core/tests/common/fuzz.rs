//! Random well-formed tool calls, rendered with random spacing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use strategos::dsl::{parse_call, Arg, Call};

const LOWER: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

fn word(rng: &mut ChaCha8Rng, max: usize) -> String {
    let mut s = String::new();
    let first = LOWER[rng.random_range(0..LOWER.len())] as char;
    s.push(if rng.random_bool(0.3) { first.to_ascii_uppercase() } else { first });
    for _ in 0..rng.random_range(0..max) {
        let c = if rng.random_bool(0.3) { char::from(b'0' + rng.random_range(0..10)) } else { LOWER[rng.random_range(0..LOWER.len())] as char };
        s.push(c);
    }
    s
}

/// Numbers with at most four decimals, the precision rendering keeps.
fn number(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-100_000i64..100_000) as f64 / [1.0, 4.0, 100.0, 10_000.0][rng.random_range(0..4)]
}

fn arg(rng: &mut ChaCha8Rng, depth: usize) -> Arg {
    let nested = depth < 3 && rng.random_bool(0.25);
    match (nested, rng.random_range(0..3)) {
        (true, 0) | (true, 1) => Arg::List((0..rng.random_range(0..4)).map(|_| arg(rng, depth + 1)).collect()),
        (true, _) => Arg::Tagged(word(rng, 4).to_lowercase(), (0..rng.random_range(0..3)).map(|_| arg(rng, depth + 1)).collect()),
        (false, 0) => Arg::Ident(word(rng, 6)),
        (false, 1) => Arg::Number(number(rng)),
        (false, _) => Arg::Pair(word(rng, 2), number(rng)),
    }
}

pub fn random_call(rng: &mut ChaCha8Rng) -> Call {
    Call::new(word(rng, 7).to_lowercase(), (0..rng.random_range(0..5)).map(|_| arg(rng, 0)).collect())
}

/// The canonical text with spaces and tabs sprinkled around delimiters.
pub fn respaced(rng: &mut ChaCha8Rng, canonical: &str) -> String {
    let mut out = String::new();
    let pad = |out: &mut String, rng: &mut ChaCha8Rng| {
        for _ in 0..rng.random_range(0..3) {
            out.push(if rng.random_bool(0.8) { ' ' } else { '\t' });
        }
    };
    pad(&mut out, rng);
    for c in canonical.chars() {
        match c {
            ' ' => pad(&mut out, rng),
            '(' | '[' | ',' => {
                out.push(c);
                pad(&mut out, rng);
            }
            ')' | ']' => {
                pad(&mut out, rng);
                out.push(c);
            }
            _ => out.push(c),
        }
    }
    pad(&mut out, rng);
    out
}

/// Parses `cases` random calls; returns the first failure.
pub fn dsl_roundtrip(cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..cases {
        let call = random_call(&mut rng);
        let canonical = call.to_string();
        let text = respaced(&mut rng, &canonical);
        let parsed = parse_call(&text).map_err(|e| format!("case {i}: {text:?} failed to parse: {e}"))?;
        if parsed != call {
            return Err(format!("case {i}: {text:?} parsed as {parsed:?}"));
        }
        if parsed.to_string() != canonical {
            return Err(format!("case {i}: rendering {canonical:?} is not stable"));
        }
    }
    Ok(cases)
}
