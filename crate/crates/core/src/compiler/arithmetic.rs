//! Re-checks every numeric equality chain written in a trace.
//!
//! A chain is a run like `(7+3)/2 = 10/2 = 5` with no identifiers inside;
//! each link must evaluate to the same value. Identifiers (`r11`, `gr21`)
//! break runs, so symbolic steps are skipped. A chain ending in `p/q`
//! where `p` equals the previous value is a score out of `q` (`= 6/10`).
//! `mean([7, 3]) = 5` is checked as well.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArithmeticSlip {
    /// Byte offset of the chain in the checked text.
    pub offset: usize,
    pub chain: String,
}

/// Rounded output is printed to four decimals.
const TOLERANCE: f64 = 6e-5;

pub fn check_arithmetic(text: &str) -> Vec<ArithmeticSlip> {
    let mut slips = Vec::new();
    for (offset, run) in runs(text) {
        let members: Vec<&str> = run.split('=').collect();
        let mut seg: Vec<(&str, f64)> = Vec::new();
        let flush = |seg: &mut Vec<(&str, f64)>, slips: &mut Vec<ArithmeticSlip>| {
            if seg.len() >= 2 && !chain_holds(seg) {
                slips.push(ArithmeticSlip { offset, chain: run.trim().to_string() });
            }
            seg.clear();
        };
        for m in members {
            match eval(m) {
                Some(v) => seg.push((m.trim(), v)),
                None => flush(&mut seg, &mut slips),
            }
        }
        flush(&mut seg, &mut slips);
    }
    for (offset, list, claimed) in mean_calls(text) {
        let nums: Option<Vec<f64>> = list.split(',').map(eval).collect();
        match (nums, eval(claimed)) {
            (Some(ns), Some(c)) if !ns.is_empty() => {
                let mean = ns.iter().sum::<f64>() / ns.len() as f64;
                if (mean - c).abs() > TOLERANCE {
                    slips.push(ArithmeticSlip { offset, chain: format!("mean([{list}]) = {claimed}") });
                }
            }
            _ => {}
        }
    }
    slips
}

fn chain_holds(seg: &[(&str, f64)]) -> bool {
    seg.windows(2).enumerate().all(|(i, w)| {
        if (w[0].1 - w[1].1).abs() <= TOLERANCE {
            return true;
        }
        // Trailing score notation: `= 6/10` after a value of 6.
        let last = i + 2 == seg.len();
        last && score_numerator(w[1].0).is_some_and(|p| (p - w[0].1).abs() <= TOLERANCE)
    })
}

fn score_numerator(s: &str) -> Option<f64> {
    let (p, q) = s.split_once('/')?;
    let p: f64 = p.trim().parse().ok()?;
    q.trim().parse::<u32>().ok()?;
    Some(p)
}

/// Maximal runs of arithmetic characters that are not glued to identifiers.
fn runs(text: &str) -> Vec<(usize, &str)> {
    let bytes = text.as_bytes();
    let allowed = |c: u8| c.is_ascii_digit() || b"+-*/()= .".contains(&c);
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_alphabetic() || c == b'_' {
            // Skip the whole identifier, digits included.
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            continue;
        }
        if allowed(c) && c != b'.' {
            let start = i;
            while i < bytes.len() && allowed(bytes[i]) {
                // A dot only continues a run inside a number.
                if bytes[i] == b'.' && !(i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit()) {
                    break;
                }
                i += 1;
            }
            let run = &text[start..i];
            if run.contains('=') {
                out.push((start, run));
            }
            continue;
        }
        i += 1;
    }
    out
}

fn mean_calls(text: &str) -> Vec<(usize, &str, &str)> {
    let mut out = Vec::new();
    let mut from = 0;
    while let Some(at) = text[from..].find("mean([") {
        let start = from + at;
        let body = start + "mean([".len();
        from = body;
        let Some(close) = text[body..].find("])") else { break };
        let list = &text[body..body + close];
        let after = &text[body + close + 2..];
        let Some(rest) = after.trim_start().strip_prefix('=') else { continue };
        let rest = rest.trim_start();
        let end = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_digit() || c == '-' || (c == '.' && rest[i + 1..].starts_with(|d: char| d.is_ascii_digit()))))
            .map_or(rest.len(), |(i, _)| i);
        if end > 0 {
            out.push((start, list, &rest[..end]));
        }
    }
    out
}

/// Evaluates `+ - * /`, parentheses and unary minus.
fn eval(s: &str) -> Option<f64> {
    let tokens: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if tokens.is_empty() {
        return None;
    }
    let mut p = Parser { t: &tokens, i: 0 };
    let v = p.expr()?;
    (p.i == tokens.len() && v.is_finite()).then_some(v)
}

struct Parser<'a> {
    t: &'a [char],
    i: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.t.get(self.i).copied()
    }

    fn expr(&mut self) -> Option<f64> {
        let mut v = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.i += 1;
            let r = self.product()?;
            v = if op == '+' { v + r } else { v - r };
        }
        Some(v)
    }

    fn product(&mut self) -> Option<f64> {
        let mut v = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.i += 1;
            let r = self.unary()?;
            v = if op == '*' { v * r } else { v / r };
        }
        Some(v)
    }

    fn unary(&mut self) -> Option<f64> {
        if self.peek() == Some('-') {
            self.i += 1;
            return Some(-self.unary()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Option<f64> {
        if self.peek() == Some('(') {
            self.i += 1;
            let v = self.expr()?;
            if self.peek() != Some(')') {
                return None;
            }
            self.i += 1;
            return Some(v);
        }
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.i += 1;
        }
        if start == self.i {
            return None;
        }
        self.t[start..self.i].iter().collect::<String>().parse().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correct_chains_pass() {
        let ok = "So, Bob's expected reward for b1 is (r11+r21)/2 = (7+3)/2 = 10/2 = 5\n\
                  r11=(gr11+br11)=8+7=15 and r12=(br12-gr12)=(-2)-(-3)=1\n\
                  Value of proposal for Alice:  (3*1) + (1*3) + (0*2) = 3+3+0 = 6/10\n\
                  Bob wants 0/1 = 0 book, 3/4 = 0.75 hat. Expected reward = mean([7, 3]) = 5.\n\
                  mean is 10/3 = 3.3333.";
        assert_eq!(check_arithmetic(ok), vec![]);
    }

    #[test]
    fn slips_are_reported() {
        let slips = check_arithmetic("so (7+3)/2 = 10/2 = 6\nand mean([8, 6]) = 6.");
        assert_eq!(slips.len(), 2);
        assert_eq!(slips[0].chain, "(7+3)/2 = 10/2 = 6");
        assert!(!check_arithmetic("Difference in payoffs 8-6 = 3.").is_empty());
    }
}
