//! Random models and reference evaluators shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use exactprob::dsl::{Blocks, EventDef, Expr, Ident, ModelFile, Query, QueryKind};
use exactprob::{make_distribution, Distribution, OutcomeSpace, PriorAssignment, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

const NAMES: [&str; 9] = ["a", "b", "c", "d", "e", "x1", "y_2", "Zed", "AsOne"];

/// Integer weights on `n` outcomes, at least one positive, and the
/// normalised distribution over `w0 .. w{n-1}`.
pub fn random_distribution(rng: &mut impl Rng, n: usize) -> (Vec<u32>, Distribution) {
    let mut w: Vec<u32> = (0..n).map(|_| rng.gen_range(0..20)).collect();
    if w.iter().all(|&x| x == 0) {
        w[rng.gen_range(0..n)] = 1;
    }
    let space = OutcomeSpace::new((0..n).map(|i| format!("w{i}"))).unwrap();
    let dist = make_distribution(normalised(&space, &w)).unwrap();
    (w, dist)
}

pub fn normalised(space: &Arc<OutcomeSpace>, w: &[u32]) -> PriorAssignment {
    let total: u32 = w.iter().sum();
    let weights = w
        .iter()
        .map(|&x| Rational::frac(x.into(), total.into()))
        .collect();
    PriorAssignment::new(space, weights).unwrap()
}

pub fn random_expr(rng: &mut impl Rng, names: &[String], depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.08) {
            Expr::Const(rng.gen())
        } else {
            Expr::var(names.choose(rng).unwrap())
        };
    }
    let op = rng.gen_range(0..5);
    let mut sub = || Box::new(random_expr(rng, names, depth - 1));
    match op {
        0 => Expr::Not(sub()),
        1 => Expr::And(sub(), sub()),
        2 => Expr::Or(sub(), sub()),
        3 => Expr::Eq(sub(), sub()),
        _ => Expr::Ne(sub(), sub()),
    }
}

fn random_blocks(rng: &mut impl Rng, vars: &[String], names: &[String]) -> Blocks {
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..=vars.len());
        let picked = vars
            .choose_multiple(rng, k)
            .map(|v| Ident::new(v.as_str()))
            .collect();
        Blocks::Signs(picked)
    } else {
        let k = rng.gen_range(1..=4);
        Blocks::List((0..k).map(|_| random_expr(rng, names, 2)).collect())
    }
}

pub fn random_query(rng: &mut impl Rng, vars: &[String], names: &[String]) -> Query {
    let kind = match rng.gen_range(0..4) {
        0 => QueryKind::Marginal(random_expr(rng, names, 3)),
        1 => QueryKind::Conditional(random_expr(rng, names, 3), random_expr(rng, names, 3)),
        2 => QueryKind::Total {
            target: random_expr(rng, names, 3),
            blocks: random_blocks(rng, vars, names),
        },
        _ => QueryKind::Partition(random_blocks(rng, vars, names)),
    };
    Query::new(kind)
}

/// A valid model on 1 to 5 variables with its integer weights, in canonical
/// outcome order.
pub fn random_model(rng: &mut impl Rng) -> (ModelFile, Vec<u32>) {
    let n = rng.gen_range(1..=5);
    let vars: Vec<String> = NAMES
        .choose_multiple(rng, n)
        .map(|s| s.to_string())
        .collect();
    let space = OutcomeSpace::boolean(&vars).unwrap();
    let mut w: Vec<u32> = (0..space.len()).map(|_| rng.gen_range(0..4)).collect();
    if w.iter().all(|&x| x == 0) {
        w[0] = 1;
    }
    let prior = normalised(&space, &w);

    let mut names = vars.clone();
    let mut events = Vec::new();
    for i in 0..rng.gen_range(0..=3) {
        let expr = random_expr(rng, &names, 3);
        let name = format!("E{i}");
        events.push(EventDef {
            name: Ident::new(name.as_str()),
            expr,
        });
        names.push(name);
    }
    let queries = (0..rng.gen_range(0..=4))
        .map(|_| random_query(rng, &vars, &names))
        .collect();
    // let some models lean on a `default` row
    let default = if rng.gen_bool(0.5) {
        Some(prior.weight(rng.gen_range(0..space.len())).clone())
    } else {
        None
    };
    let model = ModelFile::from_prior(&prior, default, events, queries).unwrap();
    (model, w)
}

/// Truth value of `e` under `values`, with events expanded from `model`.
pub fn truth(e: &Expr, model: &ModelFile, values: &[bool]) -> bool {
    let mut env: HashMap<&str, bool> = HashMap::new();
    for (v, &b) in model.vars.iter().zip(values) {
        env.insert(&v.name, b);
    }
    for def in &model.events {
        let t = eval(&def.expr, &env);
        env.insert(&def.name.name, t);
    }
    eval(e, &env)
}

fn eval(e: &Expr, env: &HashMap<&str, bool>) -> bool {
    match e {
        Expr::Const(b) => *b,
        Expr::Ref(id) => env[id.name.as_str()],
        Expr::Not(a) => !eval(a, env),
        Expr::And(a, b) => eval(a, env) && eval(b, env),
        Expr::Or(a, b) => eval(a, env) || eval(b, env),
        Expr::Eq(a, b) => eval(a, env) == eval(b, env),
        Expr::Ne(a, b) => eval(a, env) != eval(b, env),
    }
}

/// Sum of integer weights of the assignments satisfying `pred`, first
/// variable most significant.
pub fn weight_where(w: &[u32], n: usize, mut pred: impl FnMut(&[bool]) -> bool) -> u32 {
    (0..w.len())
        .filter(|&i| {
            let values: Vec<bool> = (0..n).map(|j| i & (1 << (n - 1 - j)) != 0).collect();
            pred(&values)
        })
        .map(|i| w[i])
        .sum()
}

/// Random bytes drawn mostly from characters the format uses.
pub fn random_bytes(rng: &mut impl Rng) -> Vec<u8> {
    const ALPHABET: &[u8] = b"varspiorvtqueyeTF01 ->/:\n\n()&|!=~{},#defaultotalbysignsP\t";
    let len = rng.gen_range(0..160);
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.85) {
                *ALPHABET.choose(rng).unwrap()
            } else {
                rng.gen()
            }
        })
        .collect()
}

/// A valid model text with a few bytes replaced, inserted or removed.
pub fn mutated_model(rng: &mut impl Rng, text: &str) -> Vec<u8> {
    let mut bytes = text.as_bytes().to_vec();
    for _ in 0..rng.gen_range(1..=4) {
        let at = rng.gen_range(0..=bytes.len());
        match rng.gen_range(0..3) {
            0 if at < bytes.len() => bytes[at] = rng.gen(),
            1 => bytes.insert(at, rng.gen()),
            _ if at < bytes.len() => {
                bytes.remove(at);
            }
            _ => {}
        }
    }
    bytes
}
