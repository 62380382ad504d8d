//! Shared wording: numbers, names, reward variables and objective phrases.

use crate::game::{Game, Objective, ObjectiveKind};

use super::CompileError;

/// Integers print without decimals; anything else with at most four, trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        return format!("{}", r as i64);
    }
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

/// A number as an operand: negatives are parenthesized.
pub(crate) fn term(x: f64) -> String {
    let s = fmt_num(x);
    if s.starts_with('-') { format!("({s})") } else { s }
}

/// Trim lines, collapse runs of whitespace and drop empty lines.
pub fn normalize_text(s: &str) -> String {
    s.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join("\n")
}

/// "a", "a and b", "a, b and c".
pub(crate) fn join_and(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

pub(crate) fn join_or(items: &[&str]) -> String {
    items.join(" or ")
}

pub(crate) fn possessive(name: &str) -> &'static str {
    match name {
        "Bob" => "his",
        "Gopher" => "its",
        _ => "their",
    }
}

pub(crate) fn ordinal(n: usize) -> String {
    const WORDS: [&str; 10] = ["first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth", "tenth"];
    match WORDS.get(n.wrapping_sub(1)) {
        Some(w) => w.to_string(),
        None => format!("try {n}"),
    }
}

const STAGE_LETTERS: [char; 9] = ['r', 's', 't', 'u', 'v', 'w', 'x', 'y', 'z'];

/// Variable naming for one stage of a game: `gr21` is Gopher's reward when
/// Gopher plays its 2nd action and Bob his 1st.
pub(crate) struct Names<'a> {
    pub game: &'a Game,
    letter: char,
    prefixes: Vec<String>,
    wide: bool,
}

impl<'a> Names<'a> {
    pub fn new(game: &'a Game, stage: usize) -> Result<Self, CompileError> {
        let letter = *STAGE_LETTERS
            .get(stage)
            .ok_or_else(|| CompileError::Unsupported(format!("more than {} stages", STAGE_LETTERS.len())))?;
        let firsts: Vec<String> =
            game.players().iter().map(|p| p.chars().next().unwrap_or('p').to_lowercase().collect()).collect();
        let unique = firsts.iter().enumerate().all(|(i, f)| !firsts[..i].contains(f));
        let prefixes = if unique { firsts } else { (0..game.num_players()).map(|i| format!("p{}", i + 1)).collect() };
        let wide = game.shape().iter().any(|&n| n > 9);
        Ok(Self { game, letter, prefixes, wide })
    }

    pub fn name(&self, player: usize) -> &str {
        self.game.player_name(player)
    }

    pub fn action(&self, player: usize, a: usize) -> &str {
        &self.game.actions(player)[a]
    }

    pub fn suffix(&self, profile: &[usize]) -> String {
        let parts: Vec<String> = profile.iter().map(|a| (a + 1).to_string()).collect();
        parts.join(if self.wide { "_" } else { "" })
    }

    /// `gr11`: a player's payoff variable.
    pub fn var(&self, player: usize, profile: &[usize]) -> String {
        format!("{}{}{}", self.prefixes[player], self.letter, self.suffix(profile))
    }

    /// `r11`: the scalarized reward of whoever is reasoning.
    pub fn reward_label(&self, profile: &[usize]) -> String {
        format!("{}{}", self.letter, self.suffix(profile))
    }

    /// "Gopher:a1, Bob:b1"
    pub fn moves(&self, profile: &[usize]) -> String {
        let parts: Vec<String> =
            profile.iter().enumerate().map(|(p, &a)| format!("{}:{}", self.name(p), self.action(p, a))).collect();
        parts.join(", ")
    }

    pub fn rule_number(&self, profile: &[usize]) -> usize {
        self.game.index_of(profile) + 1
    }

    /// "1. Gopher:a1, Bob:b1, then Gopher reward gr11=8 and Bob reward br11=7"
    pub fn rule_line(&self, profile: &[usize]) -> String {
        self.rule_line_as(self.rule_number(profile), profile)
    }

    /// A rule line under a different number, for excerpts of the rule list.
    pub fn rule_line_as(&self, number: usize, profile: &[usize]) -> String {
        let rewards = self.game.reward(profile);
        let parts: Vec<String> = (0..self.game.num_players())
            .map(|p| format!("{} reward {}={}", self.name(p), self.var(p, profile), fmt_num(rewards.get(p))))
            .collect();
        format!("{number}. {}, then {}", self.moves(profile), parts.join(" and "))
    }

    /// Terms of an objective as `(weight, player)`, in the order they are written.
    fn objective_terms(&self, objective: &Objective) -> Vec<(f64, usize)> {
        let owner = objective.owner;
        match &objective.kind {
            ObjectiveKind::MaxOwn => vec![(1.0, owner)],
            ObjectiveKind::HelpOther { other } => vec![(1.0, *other)],
            ObjectiveKind::Welfare => (0..self.game.num_players()).map(|p| (1.0, p)).collect(),
            ObjectiveKind::Daxity => vec![(1.0, owner), (-1.0, 1 - owner)],
            ObjectiveKind::Custom { weights } => weights.iter().copied().enumerate().map(|(p, w)| (w, p)).collect(),
        }
    }

    fn weighted(&self, terms: &[(f64, usize)], item: impl Fn(usize) -> String) -> String {
        let custom = terms.iter().any(|&(w, _)| w != 1.0 && w != -1.0);
        let mut out = String::new();
        for (i, &(w, p)) in terms.iter().enumerate() {
            if custom {
                if i > 0 {
                    out.push('+');
                }
                out.push_str(&format!("{}*{}", term(w), item(p)));
            } else {
                if i > 0 || w < 0.0 {
                    out.push(if w < 0.0 { '-' } else { '+' });
                }
                out.push_str(&item(p));
            }
        }
        out
    }

    /// `r11=(br11)=br11=7` or `r11=(gr11+br11)=8+7=15`, and the value.
    pub fn reward_clause(&self, objective: &Objective, profile: &[usize]) -> Result<(String, f64), CompileError> {
        let rewards = self.game.reward(profile);
        let value = objective.apply(rewards)?;
        let terms = self.objective_terms(objective);
        let vars = self.weighted(&terms, |p| self.var(p, profile));
        let middle = if terms.len() == 1 && terms[0].0 == 1.0 {
            vars.clone()
        } else {
            self.weighted(&terms, |p| term(rewards.get(p)))
        };
        Ok((format!("{}=({vars})={middle}={}", self.reward_label(profile), fmt_num(value)), value))
    }

    /// Objective written over payoff symbols: `br`, `gr+br`, `br-gr`.
    pub fn objective_symbol(&self, objective: &Objective) -> String {
        let terms = self.objective_terms(objective);
        self.weighted(&terms, |p| format!("{}{}", self.prefixes[p], self.letter))
    }

    /// "maximize his reward", "maximize the sum of everyone's rewards", ...
    pub fn goal(&self, objective: &Objective) -> String {
        let own = possessive(self.name(objective.owner));
        match &objective.kind {
            ObjectiveKind::MaxOwn => format!("maximize {own} reward"),
            ObjectiveKind::HelpOther { other } => format!("maximize {}'s reward", self.name(*other)),
            ObjectiveKind::Welfare => "maximize the sum of everyone's rewards".into(),
            ObjectiveKind::Daxity => {
                format!("maximize the difference between {own} reward and {}'s reward", self.name(1 - objective.owner))
            }
            ObjectiveKind::Custom { .. } => format!("maximize {}", self.objective_symbol(objective)),
        }
    }

    /// "Gopher and Bob"
    pub fn player_list(&self) -> String {
        join_and(self.game.players())
    }

    /// Sentence stating what everyone is after.
    pub fn goals_sentence(&self, objectives: &[Objective]) -> String {
        if objectives.iter().all(|o| matches!(o.kind, ObjectiveKind::MaxOwn)) {
            return format!("{} are trying to maximize their reward.", self.player_list());
        }
        let parts: Vec<String> =
            objectives.iter().map(|o| format!("{} wants to {}.", self.name(o.owner), self.goal(o))).collect();
        parts.join(" ")
    }
}

/// `(r11+r21)/2 = (7+3)/2 = 10/2 = 5` for several values, `r11 = 7` for one.
pub(crate) fn mean_expression(labels: &[String], values: &[f64]) -> (String, f64) {
    let n = values.len();
    let sum: f64 = values.iter().sum();
    let mean = sum / n as f64;
    if n == 1 {
        return (format!("{} = {}", labels[0], fmt_num(values[0])), values[0]);
    }
    let terms: Vec<String> = values.iter().map(|&v| term(v)).collect();
    let text = format!(
        "({})/{n} = ({})/{n} = {}/{n} = {}",
        labels.join("+"),
        terms.join("+"),
        fmt_num(sum),
        fmt_num(mean)
    );
    (text, mean)
}

/// Values equal within tie tolerance.
pub(crate) fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= crate::oracle::TIE_EPS
}

/// "As b1=5, b2=3, 5>3, b1>b2," ranked descending; the best labels come back too.
pub(crate) fn ranking(labels: &[&str], values: &[f64]) -> (String, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let pairs: Vec<String> = order.iter().map(|&i| format!("{}={}", labels[i], fmt_num(values[i]))).collect();
    let mut chain_v = fmt_num(values[order[0]]);
    let mut chain_l = labels[order[0]].to_string();
    for w in order.windows(2) {
        let op = if same(values[w[0]], values[w[1]]) { "=" } else { ">" };
        chain_v.push_str(&format!("{op}{}", fmt_num(values[w[1]])));
        chain_l.push_str(&format!("{op}{}", labels[w[1]]));
    }
    let top = values[order[0]];
    let mut best: Vec<usize> = (0..values.len()).filter(|&i| same(values[i], top)).collect();
    best.sort_unstable();
    let text = if order.len() == 1 {
        format!("As {},", pairs[0])
    } else {
        format!("As {}, {chain_v}, {chain_l},", pairs.join(", "))
    };
    (text, best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Mode;

    #[test]
    fn numbers() {
        assert_eq!(fmt_num(5.0), "5");
        assert_eq!(fmt_num(-2.0), "-2");
        assert_eq!(fmt_num(5.5), "5.5");
        assert_eq!(fmt_num(10.0 / 3.0), "3.3333");
        assert_eq!(fmt_num(-0.00001), "0");
        assert_eq!(term(-3.0), "(-3)");
    }

    #[test]
    fn clauses() {
        let g = Game::from_rows(["Gopher", "Bob"], [["a1", "a2"], ["b1", "b2"]], Mode::Simultaneous, vec![
            vec![8.0, 7.0],
            vec![6.0, 5.0],
            vec![4.0, 3.0],
            vec![2.0, 1.0],
        ])
        .unwrap();
        let n = Names::new(&g, 0).unwrap();
        assert_eq!(n.rule_line(&[0, 1]), "2. Gopher:a1, Bob:b2, then Gopher reward gr12=6 and Bob reward br12=5");
        assert_eq!(n.reward_clause(&Objective::max_own(1), &[0, 0]).unwrap().0, "r11=(br11)=br11=7");
        assert_eq!(n.reward_clause(&Objective::welfare(1), &[0, 0]).unwrap().0, "r11=(gr11+br11)=8+7=15");
        assert_eq!(n.reward_clause(&Objective::daxity(1), &[0, 0]).unwrap().0, "r11=(br11-gr11)=7-8=-1");
        assert_eq!(n.objective_symbol(&Objective::daxity(1)), "br-gr");
        assert_eq!(n.goal(&Objective::max_own(1)), "maximize his reward");
    }

    #[test]
    fn ranking_text() {
        let (t, best) = ranking(&["b1", "b2"], &[5.0, 3.0]);
        assert_eq!(t, "As b1=5, b2=3, 5>3, b1>b2,");
        assert_eq!(best, vec![0]);
        let (t, best) = ranking(&["a1", "a2"], &[-2.0, 2.0]);
        assert_eq!(t, "As a2=2, a1=-2, 2>-2, a2>a1,");
        assert_eq!(best, vec![1]);
        let (_, best) = ranking(&["b1", "b2"], &[0.0, 0.0]);
        assert_eq!(best, vec![0, 1]);
        assert_eq!(mean_expression(&["r11".into(), "r21".into()], &[7.0, 3.0]).0, "(r11+r21)/2 = (7+3)/2 = 10/2 = 5");
    }
}
