use std::cell::Cell;

use crate::compiler::{factored_base_question, FactoredDemos, SearchQuery};
use crate::game::{Game, Objective};
use crate::gateway::{complete, CompletionBackend, CompletionRequest};
use crate::oracle::argmax;

use super::ast::{Arg, Call, Value};
use super::DslError;

/// Where `search` calls are answered.
pub enum SearchBackend<'a> {
    /// Exact expected value from the game.
    Oracle,
    /// A fresh base-case prompt completed by a model.
    Model { backend: &'a dyn CompletionBackend, demos: &'a FactoredDemos },
}

/// The game a trace is about, and how its searches are answered.
pub struct EvalContext<'a> {
    pub game: &'a Game,
    pub search: SearchBackend<'a>,
    pub max_subcontexts: usize,
    opened: Cell<usize>,
}

/// Tokens allowed for one base-case answer.
const BASE_TOKENS: u32 = 400;

impl<'a> EvalContext<'a> {
    pub fn oracle(game: &'a Game) -> Self {
        Self::new(game, SearchBackend::Oracle)
    }

    pub fn model(game: &'a Game, backend: &'a dyn CompletionBackend, demos: &'a FactoredDemos) -> Self {
        Self::new(game, SearchBackend::Model { backend, demos })
    }

    fn new(game: &'a Game, search: SearchBackend<'a>) -> Self {
        let cap = game.all_actions().iter().map(Vec::len).sum::<usize>() + 1;
        Self { game, search, max_subcontexts: cap, opened: Cell::new(0) }
    }

    pub fn with_max_subcontexts(mut self, cap: usize) -> Self {
        self.max_subcontexts = cap;
        self
    }

    /// Number of `search` sub-contexts opened so far.
    pub fn subcontexts(&self) -> usize {
        self.opened.get()
    }

    fn player(&self, name: &str) -> Result<usize, DslError> {
        self.game
            .players()
            .iter()
            .position(|p| p.eq_ignore_ascii_case(name))
            .ok_or_else(|| DslError::BadArgument(format!("unknown player {name:?}")))
    }

    fn action(&self, player: usize, label: &str) -> Result<usize, DslError> {
        self.game
            .action_index(player, label)
            .ok_or_else(|| DslError::BadArgument(format!("unknown action {label:?} for {}", self.game.player_name(player))))
    }

    /// The query a `search` call's arguments describe.
    pub fn search_query(&self, args: &[Arg]) -> Result<SearchQuery, DslError> {
        let agent = self.player(ident_arg(&args[0])?)?;
        match &args[1] {
            Arg::Ident(name) => {
                self.player(name)?;
            }
            Arg::List(names) => {
                for n in names {
                    self.player(ident_arg(n)?)?;
                }
            }
            other => return Err(DslError::BadArgument(format!("expected other players, got {other}"))),
        }
        let keyword = ident_arg(&args[2])?;
        let objective = Objective::from_keyword(keyword, agent, self.game.num_players())
            .ok_or_else(|| DslError::BadArgument(format!("unknown objective {keyword:?}")))?;
        let action = self.action(agent, ident_arg(&args[3])?)?;
        let mut others = vec![None; self.game.num_players()];
        if let Some(given) = args.get(4) {
            let Arg::List(items) = given else {
                return Err(DslError::BadArgument(format!("expected a list of player actions, got {given}")));
            };
            for item in items {
                let Arg::Tagged(tag, acts) = item else {
                    return Err(DslError::BadArgument(format!("expected player[actions], got {item}")));
                };
                let q = self.player(tag)?;
                if acts.is_empty() {
                    return Err(DslError::EmptyList(format!("actions of {tag}")));
                }
                let set = acts.iter().map(|a| self.action(q, ident_arg(a)?)).collect::<Result<Vec<_>, _>>()?;
                others[q] = Some(set);
            }
        }
        Ok(SearchQuery { agent, objective, action, others })
    }

    fn search(&self, args: &[Arg]) -> Result<f64, DslError> {
        let query = self.search_query(args)?;
        let opened = self.opened.get() + 1;
        if opened > self.max_subcontexts {
            return Err(DslError::DepthExceeded(self.max_subcontexts));
        }
        self.opened.set(opened);
        match &self.search {
            SearchBackend::Oracle => Ok(query.value(self.game)?),
            SearchBackend::Model { backend, demos } => {
                let prompt = demos.base_prompt(&factored_base_question(self.game, &query)?);
                let text = complete(*backend, &CompletionRequest::new(prompt, &["\nQ:"], BASE_TOKENS))?;
                parse_answer(&text).ok_or(DslError::DivergentBackend(text))
            }
        }
    }
}

/// The number in the last `Answer:` line.
fn parse_answer(text: &str) -> Option<f64> {
    let at = text.rfind("Answer:")?;
    let rest = text[at + "Answer:".len()..].lines().next()?.trim();
    rest.trim_end_matches('.').trim().parse().ok()
}

fn ident_arg(a: &Arg) -> Result<&str, DslError> {
    match a {
        Arg::Ident(s) => Ok(s),
        other => Err(DslError::BadArgument(format!("expected a name, got {other}"))),
    }
}

fn arity(call: &Call, ok: bool, expected: &'static str) -> Result<(), DslError> {
    if ok {
        Ok(())
    } else {
        Err(DslError::ArityMismatch { tool: call.name.clone(), expected, got: call.args.len() })
    }
}

pub fn eval_call(call: &Call, ctx: &EvalContext) -> Result<Value, DslError> {
    let n = call.args.len();
    match call.name.as_str() {
        "mean" => {
            arity(call, n == 1, "1")?;
            let Arg::List(items) = &call.args[0] else {
                return Err(DslError::BadArgument(format!("mean expects a list, got {}", call.args[0])));
            };
            if items.is_empty() {
                return Err(DslError::EmptyList("mean".into()));
            }
            let xs = items
                .iter()
                .map(|a| match a {
                    Arg::Number(x) => Ok(*x),
                    other => Err(DslError::BadArgument(format!("mean expects numbers, got {other}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Value::Number(xs.iter().sum::<f64>() / xs.len() as f64))
        }
        "compare" => {
            arity(call, n == 3, "3")?;
            ident_arg(&call.args[0])?;
            let keyword = ident_arg(&call.args[1])?;
            let Arg::List(items) = &call.args[2] else {
                return Err(DslError::BadArgument(format!("compare expects a list, got {}", call.args[2])));
            };
            if items.is_empty() {
                return Err(DslError::EmptyList("compare".into()));
            }
            let (labels, values): (Vec<&str>, Vec<f64>) = items
                .iter()
                .map(|a| match a {
                    Arg::Pair(k, v) => Ok((k.as_str(), if keyword == "min" { -v } else { *v })),
                    other => Err(DslError::BadArgument(format!("compare expects action=value, got {other}"))),
                })
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .unzip();
            Ok(Value::Actions(argmax(&values).into_iter().map(|i| labels[i].to_string()).collect()))
        }
        "search" => {
            arity(call, n == 4 || n == 5, "4 or 5")?;
            Ok(Value::Number(ctx.search(&call.args)?))
        }
        other => Err(DslError::UnknownTool(other.to_string())),
    }
}
