//! Canonical JSON game documents (`"schema": "strategos/game-v1"`).
//!
//! ```json
//! {"schema": "strategos/game-v1",
//!  "players": ["Gopher", "Bob"],
//!  "actions": [["a1", "a2"], ["b1", "b2"]],
//!  "mode": "simultaneous",
//!  "payoffs": [[[8, 7], [6, 5]], [[4, 3], [2, 1]]],
//!  "continuations": {"a2,b2": { ...nested stage document... }}}
//! ```
//!
//! `payoffs` nests one array level per player in player order; the innermost
//! array is the reward vector. Sequential stages carry `"mode": "sequential"`
//! and an `"order"` list of player names. Continuation keys are the
//! comma-joined action labels of the continued profile.

use serde_json::{json, Map, Value};

use super::{Game, GameError, GameTree, Mode, StageNode};

pub const SCHEMA: &str = "strategos/game-v1";

fn num(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        json!(x as i64)
    } else {
        json!(x)
    }
}

fn stage_to_value(node: &StageNode) -> Value {
    let g = &node.game;
    let mut obj = Map::new();
    obj.insert("players".into(), json!(g.players()));
    obj.insert("actions".into(), json!(g.all_actions()));
    match g.mode() {
        Mode::Simultaneous => {
            obj.insert("mode".into(), json!("simultaneous"));
        }
        Mode::Sequential { order } => {
            obj.insert("mode".into(), json!("sequential"));
            let names: Vec<&str> = order.iter().map(|&p| g.player_name(p)).collect();
            obj.insert("order".into(), json!(names));
        }
    }
    obj.insert("payoffs".into(), nest(g, 0, &mut Vec::new()));
    if !node.continuations.is_empty() {
        let mut conts = Map::new();
        for (profile, next) in &node.continuations {
            conts.insert(g.profile_labels(profile).join(","), stage_to_value(next));
        }
        obj.insert("continuations".into(), Value::Object(conts));
    }
    Value::Object(obj)
}

fn nest(g: &Game, depth: usize, prefix: &mut Vec<usize>) -> Value {
    if depth == g.num_players() {
        return Value::Array(g.reward(prefix).as_slice().iter().copied().map(num).collect());
    }
    let mut items = Vec::new();
    for a in 0..g.actions(depth).len() {
        prefix.push(a);
        items.push(nest(g, depth + 1, prefix));
        prefix.pop();
    }
    Value::Array(items)
}

pub fn tree_to_value(tree: &GameTree) -> Value {
    let mut v = stage_to_value(&tree.root);
    if let Value::Object(obj) = &mut v {
        let mut with_schema = Map::new();
        with_schema.insert("schema".into(), json!(SCHEMA));
        with_schema.extend(std::mem::take(obj));
        *obj = with_schema;
    }
    v
}

pub fn to_json(tree: &GameTree) -> String {
    serde_json::to_string_pretty(&tree_to_value(tree)).expect("game documents always serialize")
}

pub fn game_to_json(game: &Game) -> String {
    to_json(&GameTree::flat(game.clone()))
}

fn bad(msg: impl Into<String>) -> GameError {
    GameError::Document(msg.into())
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>, GameError> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array")))?
        .iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad(format!("{what} entries must be strings"))))
        .collect()
}

fn flatten_payoffs(v: &Value, depth: usize, n: usize, out: &mut Vec<Vec<f64>>) -> Result<(), GameError> {
    let arr = v.as_array().ok_or_else(|| bad("payoffs must be nested arrays"))?;
    if depth == n {
        let rewards = arr
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| bad("rewards must be numbers")))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(rewards);
        return Ok(());
    }
    for item in arr {
        flatten_payoffs(item, depth + 1, n, out)?;
    }
    Ok(())
}

fn stage_from_value(v: &Value) -> Result<StageNode, GameError> {
    let obj = v.as_object().ok_or_else(|| bad("stage must be an object"))?;
    if let Some(schema) = obj.get("schema") {
        if schema.as_str() != Some(SCHEMA) {
            return Err(bad(format!("unsupported schema {schema}")));
        }
    }
    let players = strings(obj.get("players").ok_or_else(|| bad("missing players"))?, "players")?;
    let actions: Vec<Vec<String>> = obj
        .get("actions")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing actions"))?
        .iter()
        .map(|a| strings(a, "actions"))
        .collect::<Result<_, _>>()?;
    let mode = match obj.get("mode").and_then(Value::as_str).unwrap_or("simultaneous") {
        "simultaneous" => Mode::Simultaneous,
        "sequential" => {
            let order = match obj.get("order") {
                Some(o) => strings(o, "order")?
                    .iter()
                    .map(|name| {
                        players.iter().position(|p| p == name).ok_or_else(|| GameError::UnknownPlayer(name.clone()))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None => (0..players.len()).collect(),
            };
            Mode::Sequential { order }
        }
        other => return Err(bad(format!("unknown mode {other:?}"))),
    };
    let mut rows = Vec::new();
    flatten_payoffs(obj.get("payoffs").ok_or_else(|| bad("missing payoffs"))?, 0, players.len(), &mut rows)?;
    let game = Game::from_rows(players, actions, mode, rows)?;
    let mut node = StageNode::leaf(game);
    if let Some(conts) = obj.get("continuations") {
        let conts = conts.as_object().ok_or_else(|| bad("continuations must be an object"))?;
        for (key, next) in conts {
            let labels: Vec<&str> = key.split(',').map(str::trim).collect();
            let profile = node.game.parse_profile(&labels)?;
            let next = stage_from_value(next)?;
            node = node.with_continuation(profile, next)?;
        }
    }
    Ok(node)
}

pub fn tree_from_value(v: &Value) -> Result<GameTree, GameError> {
    GameTree::new(stage_from_value(v)?)
}

pub fn from_json(text: &str) -> Result<GameTree, GameError> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    tree_from_value(&v)
}
