use serde::{Deserialize, Serialize};

use crate::compiler::{build_demo_set, DemoStyle, Problem};

use super::HarnessError;

/// How a trial prompts for an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Demonstrations with full compiled reasoning traces.
    #[serde(rename = "strategic")]
    Strategic,
    #[serde(rename = "0shot")]
    ZeroShot,
    #[serde(rename = "0shot-cot")]
    ZeroShotCot,
    #[serde(rename = "fewshot")]
    FewShot,
    /// A seeded uniform draw; no prompt.
    #[serde(rename = "random")]
    Random,
    /// Tool-calling trace with searches answered in sub-contexts.
    #[serde(rename = "factored")]
    Factored,
    /// Two chained contexts; scored against level-2 targets.
    #[serde(rename = "cascade-2")]
    Cascade2,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Strategic,
        Method::ZeroShot,
        Method::ZeroShotCot,
        Method::FewShot,
        Method::Random,
        Method::Factored,
        Method::Cascade2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Strategic => "strategic",
            Method::ZeroShot => "0shot",
            Method::ZeroShotCot => "0shot-cot",
            Method::FewShot => "fewshot",
            Method::Random => "random",
            Method::Factored => "factored",
            Method::Cascade2 => "cascade-2",
        }
    }

    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        let alias = match s {
            "zero-shot" => "0shot",
            "zero-shot-cot" => "0shot-cot",
            "few-shot" => "fewshot",
            other => other,
        };
        Method::ALL.into_iter().find(|m| m.name() == alias).ok_or_else(|| HarnessError::UnknownMethod(s.to_string()))
    }

    /// Demonstration style, for methods that prompt with a demo set.
    pub fn demo_style(self) -> Option<DemoStyle> {
        match self {
            Method::Strategic => Some(DemoStyle::Strategic),
            Method::ZeroShot => Some(DemoStyle::ZeroShot),
            Method::ZeroShotCot => Some(DemoStyle::ZeroShotCot),
            Method::FewShot => Some(DemoStyle::FewShot),
            Method::Random | Method::Factored | Method::Cascade2 => None,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineKind {
    ZeroShot,
    ZeroShotCot,
    FewShot,
}

/// Prompt without reasoning demonstrations: the bare question, the question
/// with a step-by-step cue, or the demo games with answers only.
pub fn build_baseline_prompt(kind: BaselineKind, problem: &Problem) -> Result<String, HarnessError> {
    let style = match kind {
        BaselineKind::ZeroShot => DemoStyle::ZeroShot,
        BaselineKind::ZeroShotCot => DemoStyle::ZeroShotCot,
        BaselineKind::FewShot => DemoStyle::FewShot,
    };
    Ok(build_demo_set(problem, style)?.flatten())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::canonical_demo_games;

    fn demo_problem() -> Problem {
        let [descending, _] = canonical_demo_games();
        Problem::matrix(descending, 0)
    }

    #[test]
    fn zero_shot_cot_ends_with_cue() {
        let p = build_baseline_prompt(BaselineKind::ZeroShotCot, &demo_problem()).unwrap();
        assert!(p.ends_with("Let's think step by step:"));
    }

    #[test]
    fn zero_shot_is_the_question() {
        let problem = demo_problem();
        let p = build_baseline_prompt(BaselineKind::ZeroShot, &problem).unwrap();
        assert_eq!(p, format!("{}\n\nA:", problem.question().unwrap()));
    }

    #[test]
    fn few_shot_has_answers_without_reasoning() {
        let p = build_baseline_prompt(BaselineKind::FewShot, &demo_problem()).unwrap();
        assert!(p.contains("A:Gopher's action:a1"));
        assert!(!p.contains("Let's reason"));
        assert!(!p.contains("expected reward"));
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(Method::parse(m.name()).unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{m}\""));
        }
        assert_eq!(Method::parse("zero-shot-cot").unwrap(), Method::ZeroShotCot);
    }
}
