//! A local completion endpoint that answers every request from the prompt alone.

use std::io::{Read, Write};
use std::net::TcpListener;
use std::path::Path;
use std::process::Command;

use sha2::{Digest, Sha256};
use strategos::harness::ExperimentReport;

/// Picks one of a few action labels from a hash of the prompt.
fn answer(body: &str) -> String {
    let v: serde_json::Value = serde_json::from_str(body).unwrap_or_default();
    let h = Sha256::digest(v["prompt"].as_str().unwrap_or("").as_bytes());
    let text = format!(" {}\n", ["a1", "a2"][usize::from(h[0] % 2)]);
    serde_json::json!({"choices": [{"text": text}]}).to_string()
}

fn read_request(s: &mut std::net::TcpStream) -> String {
    let mut seen = Vec::new();
    let mut buf = [0u8; 16384];
    loop {
        let n = s.read(&mut buf).unwrap_or(0);
        seen.extend_from_slice(&buf[..n]);
        let text = String::from_utf8_lossy(&seen);
        if let Some(h) = text.find("\r\n\r\n") {
            let len = text[..h]
                .lines()
                .find_map(|l| l.to_ascii_lowercase().strip_prefix("content-length:").map(|v| v.trim().parse::<usize>().unwrap()))
                .unwrap_or(0);
            if seen.len() >= h + 4 + len {
                return String::from_utf8_lossy(&seen[h + 4..h + 4 + len]).into_owned();
            }
        }
        if n == 0 {
            return String::new();
        }
    }
}

/// Serves forever on a background thread; returns the completions URL.
pub fn spawn_stub() -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut s) = stream else { continue };
            std::thread::spawn(move || {
                let body = answer(&read_request(&mut s));
                let reply = format!(
                    "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
                let _ = s.write_all(reply.as_bytes());
            });
        }
    });
    format!("http://{addr}/v1/completions")
}

/// Runs `strategos evaluate` on a small suite and reads back the report.
pub fn evaluate(dir: &Path, out: &str, backend: &[&str], url: &str) -> ExperimentReport {
    let status = Command::new(env!("CARGO_BIN_EXE_strategos"))
        .args(["evaluate", "--suite", "simultaneous-2x2", "--method", "strategic,0shot", "--variations", "2"])
        .args(backend)
        .arg("--out")
        .arg(dir.join(out))
        .env("STRATEGOS_API_URL", url)
        .env_remove("STRATEGOS_API_KEY")
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    serde_json::from_slice(&std::fs::read(dir.join(out)).unwrap()).unwrap()
}
