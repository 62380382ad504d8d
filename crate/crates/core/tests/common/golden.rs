//! Hand-transcribed reference prompts and the compiled text they must match.
//!
//! Each reference file is checked in as transcribed. The reference prompts
//! contain a handful of slips (a missing word, an arithmetic error, a line
//! copied from the wrong rule); each correction is listed with its pair and
//! must apply exactly where stated, so an unexpected difference fails.

use strategos::compiler::{
    build_demo_set, canonical_demo_games, compile_factored_demos, compile_proposal_trace, default_negotiation_demo,
    normalize_text, render_deal_question, render_episode, DemoStyle, EpisodeEvent, Problem,
};
use strategos::negotiation::{Allocation, ItemValues, Pot};
use strategos::oracle::Fairness;

pub fn reference(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}.reference.txt", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

/// Applies `(from, to, count)` corrections, checking each occurs `count` times.
pub fn corrected(text: &str, errata: &[(&str, &str, usize)]) -> String {
    let mut out = text.to_string();
    for (from, to, count) in errata {
        assert_eq!(out.matches(from).count(), *count, "erratum {from:?} should match {count} time(s)");
        out = out.replace(from, to);
    }
    out
}

/// First differing normalized line, if any.
pub fn first_difference(actual: &str, expected: &str) -> Option<String> {
    let (a, e) = (normalize_text(actual), normalize_text(expected));
    if a == e {
        return None;
    }
    for (i, (x, y)) in a.lines().zip(e.lines()).enumerate() {
        if x != y {
            return Some(format!("line {}: {x:?} vs {y:?}", i + 1));
        }
    }
    Some(format!("{} lines vs {}", a.lines().count(), e.lines().count()))
}

/// `(compiled, expected)` for the matrix demonstration.
pub fn matrix_pair() -> (String, String) {
    let [descending, _] = canonical_demo_games();
    let set = build_demo_set(&Problem::matrix(descending, 0), DemoStyle::Strategic).unwrap();
    let demo = &set.demos[0];
    let expected = corrected(
        &reference("matrix_demo"),
        &[
            ("1. Gopher:a1, Bob:b1, Gopher reward", "1. Gopher:a1, Bob:b1, then Gopher reward", 1),
            ("3. Gopher:a2, Bob:b1, Gopher reward", "3. Gopher:a2, Bob:b1, then Gopher reward", 1),
        ],
    );
    (format!("{}\n{}", demo.question, demo.trace.text), expected)
}

pub fn factored_recursive_pair() -> (String, String) {
    let expected = corrected(
        &reference("factored_recursive"),
        &[
            ("exepected", "expected", 8),
            ("b2=0])= [b1,b2]", "b2=0]) = [b1,b2]", 1),
            ("As Bob plays b1 or b2 we", "As Bob plays b1 or b2, we", 1),
        ],
    );
    (compile_factored_demos().unwrap().recursive_text(), expected)
}

pub fn factored_base_pair() -> (String, String) {
    let expected = corrected(
        &reference("factored_base"),
        &[(
            "2. Gopher:a2, Bob:b1, then Gopher reward gr12=6 and Bob reward br12=5\nBob's",
            "2. Gopher:a2, Bob:b1, then Gopher reward gr21=4 and Bob reward br21=3\nBob's",
            1,
        )],
    );
    (compile_factored_demos().unwrap().base_text(), expected)
}

pub fn broker_pot() -> (Pot, ItemValues, ItemValues) {
    (Pot::new(3, 1, 2), ItemValues::new(1, 3, 2), ItemValues::new(0, 2, 4))
}

pub fn broker_pair() -> (String, String) {
    let (pot, alice, bob) = broker_pot();
    let tries = [Allocation::new(3, 1, 0), Allocation::new(3, 0, 1), Allocation::new(2, 0, 2)];
    let trace = compile_proposal_trace(&pot, &alice, &bob, Fairness::Equality, &tries).unwrap();
    // The reference names the wrong minimum and the wrong allocation in its conclusion.
    let expected = corrected(
        &reference("broker_equality"),
        &[
            ("Minimum difference is 2.", "Minimum difference is 1.", 1),
            ("Alice gets 0 books, 1 hats, 2 balls.\npropose: book=0 hat=1 ball=2", "Alice gets 3 books, 0 hats, 1 balls.\npropose: book=3 hat=0 ball=1", 1),
        ],
    );
    let question = render_deal_question(&pot, &alice, &bob, Fairness::Equality);
    (format!("{question}\n{}", trace.text), expected)
}

/// Free-text commentary lines of each agent turn in a rendered episode.
fn commentaries(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current: Option<Vec<&str>> = None;
    for line in text.lines() {
        if line.starts_with("Alice values:") {
            current = Some(Vec::new());
        } else if line.starts_with("Alice will try to get") {
            out.push(current.take().unwrap().join("\n"));
        } else if let Some(c) = current.as_mut() {
            c.push(line);
        }
    }
    out
}

pub fn negotiation_pair() -> (String, String) {
    let text = reference("negotiation_episode");
    let mut episode = default_negotiation_demo();
    let mut notes = commentaries(&text).into_iter();
    for ev in &mut episode.events {
        if let EpisodeEvent::Agent { commentary, .. } = ev {
            *commentary = notes.next().unwrap();
        }
    }
    let expected = corrected(
        &text,
        &[("So, Alice gets(1-0)", "So, Alice gets (1-0)", 1), ("= 4+4+0 = 8\n", "= 4+4+0 = 8/10\n", 1)],
    );
    (render_episode(&episode).unwrap(), expected)
}

/// Every reference pair with its name.
pub fn all_pairs() -> Vec<(&'static str, String, String)> {
    let pairs = [
        ("matrix", matrix_pair()),
        ("factored recursive", factored_recursive_pair()),
        ("factored base", factored_base_pair()),
        ("broker", broker_pair()),
        ("negotiation", negotiation_pair()),
    ];
    pairs.into_iter().map(|(n, (a, e))| (n, a, e)).collect()
}
