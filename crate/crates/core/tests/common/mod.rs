//! Naive reference oracle for integration tests: every quantity comes from a
//! full scan of the profile cross-product, sharing no code with the library's
//! oracle beyond payoff lookup.

#![allow(dead_code)]

use strategos::compiler::Problem;
use strategos::game::{Game, Mode, Objective, ObjectiveKind, StageNode};

pub mod reference;
pub mod factored;
pub mod fuzz;
pub mod golden;
pub mod sim;
pub mod stub;
pub mod traces;

const EPS: f64 = 1e-9;

pub fn cross_product(shape: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &k in shape {
        out = out.into_iter().flat_map(|p| (0..k).map(move |a| [p.clone(), vec![a]].concat())).collect();
    }
    out
}

pub fn scalarize(o: &Objective, r: &[f64]) -> f64 {
    match &o.kind {
        ObjectiveKind::MaxOwn => r[o.owner],
        ObjectiveKind::HelpOther { other } => r[*other],
        ObjectiveKind::Welfare => r.iter().sum(),
        ObjectiveKind::Daxity => r[o.owner] - r[1 - o.owner],
        ObjectiveKind::Custom { weights } => weights.iter().zip(r).map(|(w, x)| w * x).sum(),
    }
}

pub fn best_of(values: &[f64]) -> Vec<usize> {
    let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (0..values.len()).filter(|&i| values[i] >= top - EPS).collect()
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

/// Payoff table of a stage with continuations replaced by their played-out value.
struct Table {
    shape: Vec<usize>,
    mode: Mode,
    rows: Vec<(Vec<usize>, Vec<f64>)>,
}

impl Table {
    fn at(&self, p: &[usize]) -> &[f64] {
        &self.rows.iter().find(|(q, _)| q == p).expect("profile in table").1
    }
}

fn table(node: &StageNode, player: usize, objectives: &[Objective]) -> Table {
    let g: &Game = &node.game;
    let shape: Vec<usize> = (0..g.num_players()).map(|q| g.actions(q).len()).collect();
    let rows = cross_product(&shape)
        .into_iter()
        .map(|p| {
            let r = match node.continuations.get(&p) {
                Some(next) => solve_stage(next, player, objectives).1,
                None => g.reward(&p).as_slice().to_vec(),
            };
            (p, r)
        })
        .collect();
    Table { shape, mode: g.mode().clone(), rows }
}

/// (argmax set, expected reward vector) of a stage for `player`, with
/// simultaneous opponents naive and sequential followers best-responding.
fn solve_stage(node: &StageNode, player: usize, objectives: &[Objective]) -> (Vec<usize>, Vec<f64>) {
    let t = table(node, player, objectives);
    let n = t.shape.len();
    let profiles = cross_product(&t.shape);
    let average = |ps: &[&Vec<usize>]| -> Vec<f64> {
        (0..n).map(|k| mean(ps.iter().map(|p| t.at(p)[k]))).collect()
    };
    if let Mode::Sequential { order } = &t.mode {
        if order[0] == player {
            let f = 1 - player;
            let mut replies = Vec::new();
            let mut values = Vec::new();
            for a in 0..t.shape[player] {
                let row: Vec<&Vec<usize>> = profiles.iter().filter(|p| p[player] == a).collect();
                let fv: Vec<f64> = row.iter().map(|p| scalarize(&objectives[f], t.at(p))).collect();
                let r: Vec<&Vec<usize>> = best_of(&fv).into_iter().map(|i| row[i]).collect();
                values.push(mean(r.iter().map(|p| scalarize(&objectives[player], t.at(p)))));
                replies.push(r);
            }
            let best = best_of(&values);
            // Weight each chosen action equally, then its replies equally.
            let outcome: Vec<f64> = (0..n)
                .map(|k| mean(best.iter().map(|&a| mean(replies[a].iter().map(|p| t.at(p)[k])))))
                .collect();
            return (best, outcome);
        }
    }
    let mut sets: Vec<Vec<usize>> = (0..n).map(|q| (0..t.shape[q]).collect()).collect();
    for q in (0..n).filter(|&q| q != player) {
        let values: Vec<f64> = (0..t.shape[q])
            .map(|b| mean(profiles.iter().filter(|p| p[q] == b).map(|p| scalarize(&objectives[q], t.at(p)))))
            .collect();
        sets[q] = best_of(&values);
    }
    let allowed = |p: &Vec<usize>, sets: &[Vec<usize>]| (0..n).all(|q| q == player || sets[q].contains(&p[q]));
    let values: Vec<f64> = (0..t.shape[player])
        .map(|a| {
            mean(profiles.iter().filter(|p| p[player] == a && allowed(p, &sets)).map(|p| scalarize(&objectives[player], t.at(p))))
        })
        .collect();
    let best = best_of(&values);
    sets[player] = best.clone();
    let played: Vec<&Vec<usize>> = profiles.iter().filter(|p| (0..n).all(|q| sets[q].contains(&p[q]))).collect();
    (best, average(&played))
}

/// Best actions for a problem, by brute force.
pub fn naive_best(problem: &Problem) -> Vec<usize> {
    match problem {
        Problem::Game { tree, player, objectives, opponent_level } => {
            assert_eq!(*opponent_level, 0, "naive oracle covers level-1 questions");
            solve_stage(&tree.root, *player, objectives).0
        }
        Problem::Hidden { game, observed, objective } => {
            let (obs, inf) = (game.observer, game.informed);
            let at = |own: usize, other: usize| {
                let mut p = vec![0; 2];
                p[obs] = own;
                p[inf] = other;
                p
            };
            let states = game.states();
            let consistent: Vec<bool> = states
                .iter()
                .map(|s| {
                    let k = s.game.actions(inf).len();
                    let profiles = cross_product(&[s.game.actions(0).len(), s.game.actions(1).len()]);
                    let values: Vec<f64> =
                        (0..k).map(|b| mean(profiles.iter().filter(|p| p[inf] == b).map(|p| s.game.reward(p).get(inf)))).collect();
                    best_of(&values).contains(observed)
                })
                .collect();
            let any = consistent.iter().any(|&c| c);
            let weights: Vec<f64> =
                states.iter().zip(&consistent).map(|(s, &c)| if c || !any { s.prior } else { 0.0 }).collect();
            let total: f64 = weights.iter().sum();
            let k = game.reference().actions(obs).len();
            let values: Vec<f64> = (0..k)
                .map(|a| {
                    states
                        .iter()
                        .zip(&weights)
                        .map(|(s, w)| w / total * scalarize(objective, s.game.reward(&at(a, *observed)).as_slice()))
                        .sum()
                })
                .collect();
            best_of(&values)
        }
        Problem::Communication { game, objective } => {
            let (ann, lis) = (game.announcer, game.listener());
            let g = &game.base;
            let r = |l: usize, x: usize| {
                let mut p = vec![0; 2];
                p[lis] = l;
                p[ann] = x;
                g.reward(&p).as_slice().to_vec()
            };
            let (nl, na) = (g.actions(lis).len(), g.actions(ann).len());
            let reply_to = |xs: &[usize]| -> Vec<usize> {
                best_of(&(0..nl).map(|l| mean(xs.iter().map(|&x| scalarize(objective, &r(l, x))))).collect::<Vec<_>>())
            };
            let credulous = reply_to(&[game.announcement]);
            let gains: Vec<f64> = (0..na).map(|x| mean(credulous.iter().map(|&l| r(l, x)[ann]))).collect();
            let plans = best_of(&gains);
            let predicted = if plans.contains(&game.announcement) { vec![game.announcement] } else { plans };
            reply_to(&predicted)
        }
    }
}
