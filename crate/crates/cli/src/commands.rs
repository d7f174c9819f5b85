use std::fs;
use std::path::Path;

use qospath::alt_euler::{build_alt_euler, verify_alt_euler};
use qospath::alt_path::{alt_path_expanded, alt_path_two_best, alt_walk_cost, verify_alt_path, TwoBestMode};
use qospath::bicriteria::{
    exact_constrained, solve_constrained, BicriteriaAnswer, BudgetSense, ConstrainedQuery, Multiplier, Objective,
};
use qospath::cube_ham::{cube_ham_path, step_distances, verify_cube_path};
use qospath::knapsack::{classify, classify_by_removal, DpTables, KnapsackInstance, UNBOUNDED};
use qospath::oracles::{
    alt_euler_exists, alt_walk_optimum, classify_by_paths, classify_subsets, classify_undirected_by_paths,
    constrained_optimum, enumerate_q_paths_cycles, EnumerationBudget,
};
use qospath::sensitivity::{classify_undirected, classify_unit, classify_weighted, DistanceLabels};
use qospath::subset_path::{min_q_cycle, min_q_path, walk_cost, SubsetFilter};
use qospath::tournament::{ham_path, verify_ham_path, MatrixTournament, RandomTournament, Strategy, Tournament};
use qospath::{
    Aggregate, BiweightedDigraph, ColoredDigraph, ColoredMultigraph, Cost, ElementClassification, WeightedDigraph,
    WeightedEdge, WeightedGraph,
};

use crate::record::{oracle_budget, Record, Verification};
use crate::{AltMethod, Command, Goal, Sense, Shape};

type CmdResult = Result<Record, String>;

pub fn parse_cap(s: &str) -> Result<u64, String> {
    if s.eq_ignore_ascii_case("unbounded") {
        return Ok(UNBOUNDED);
    }
    match s.parse::<u64>() {
        Ok(q) if q >= 2 => Ok(q),
        _ => Err(format!("expected an integer >= 2 or \"unbounded\", got {s:?}")),
    }
}

pub fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
        .map_err(|e: qospath::tournament::TournamentError| e.to_string())
}

pub fn parse_aggregate(s: &str) -> Result<Aggregate, String> {
    s.parse()
}

pub fn parse_mask(s: &str) -> Result<u32, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u32::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| format!("invalid vertex mask {s:?}"))
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load<T, E: std::fmt::Display>(path: &Path, parse: impl FnOnce(&str) -> Result<T, E>) -> Result<T, String> {
    parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn same_cost(a: Cost, b: Cost) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Bicriteria {
            graph,
            source,
            target,
            budget,
            sense,
            objective,
            exact,
            verify,
        } => {
            let g = load(&graph, BiweightedDigraph::parse)?;
            let q = ConstrainedQuery {
                source,
                target,
                budget,
                sense: match sense {
                    Sense::AtMost => BudgetSense::AtMost,
                    Sense::AtLeast => BudgetSense::AtLeast,
                },
                objective: match objective {
                    Goal::Min => Objective::Minimize,
                    Goal::Max => Objective::Maximize,
                },
            };
            let answer = if exact {
                exact_constrained(&g, &q)
            } else {
                solve_constrained(&g, &q)
            }
            .map_err(|e| e.to_string())?;
            let mut r = Record::new(answer.status.as_str());
            if let Some(p) = &answer.path {
                r.push("w1sum", p.w1sum).push("w2sum", p.w2sum);
                r.list("path", &p.path.vertices).list("edges", &p.path.edges);
            }
            if let Some(x) = answer.multiplier {
                r.push("multiplier", multiplier_text(x));
            }
            if verify {
                r.verified(verify_bicriteria(&g, &q, &answer, exact, &oracle_budget()?));
            }
            Ok(r)
        }
        Command::Sensitivity {
            graph,
            source,
            target,
            undirected,
            unit,
            verify,
        } => {
            let budget = if verify { Some(oracle_budget()?) } else { None };
            let (classes, distance, check) = if undirected {
                let ug = load(&graph, WeightedGraph::parse)?;
                let c = classify_undirected(&ug, source, target).map_err(|e| e.to_string())?;
                let d = DistanceLabels::compute(&qospath::graph::undirected_to_directed(&ug).digraph, source, target);
                let check = budget.map(|b| classify_undirected_by_paths(&ug, source, target, &b).map(|o| o == c));
                (c, d.shortest(target), check)
            } else {
                let g = load(&graph, WeightedDigraph::parse)?;
                let c = if unit {
                    classify_unit(&g, source, target)
                } else {
                    classify_weighted(&g, source, target)
                }
                .map_err(|e| e.to_string())?;
                let d = DistanceLabels::compute(&g, source, target);
                let check = budget.map(|b| classify_by_paths(&g, source, target, &b).map(|o| o == c));
                (c, d.shortest(target), check)
            };
            let mut r = Record::new(if distance.is_finite() {
                "classified"
            } else {
                "unreachable"
            });
            if distance.is_finite() {
                r.push("distance", distance);
            }
            categories(&mut r, &classes);
            if let Some(check) = check {
                r.verified(check.into());
            }
            Ok(r)
        }
        Command::KnapsackClassify {
            items,
            target,
            costs,
            cap,
            by_removal,
            verify,
        } => {
            let (weights, item_costs) = load(&items, |t| parse_items(t, costs))?;
            let inst = KnapsackInstance::with_cap(weights.clone(), item_costs.clone(), target, cap)
                .map_err(|e| e.to_string())?;
            let cats = if by_removal {
                classify_by_removal(&inst)
            } else {
                classify(&inst)
            };
            let tables = DpTables::build(&inst);
            let feasible = tables.ok1(inst.len(), target);
            let mut r = Record::new(if feasible { "classified" } else { "infeasible" });
            if let Some(c) = tables.cmin1(inst.len(), target).filter(|_| costs) {
                r.push("min_cost", c);
            }
            for (i, c) in cats.iter().enumerate() {
                r.push(format!("item[{i}]"), c);
            }
            if verify {
                let b = oracle_budget()?;
                let check = classify_subsets(&weights, item_costs.as_deref(), target as u64, &b).map(|o| o == cats);
                r.verified(check.into());
            }
            Ok(r)
        }
        Command::Tournament {
            n,
            seed,
            matrix,
            strategy,
            verify,
        } => match matrix {
            Some(path) => {
                let t = load(&path, MatrixTournament::parse)?;
                tournament(&t, strategy, verify)
            }
            None => tournament(
                &RandomTournament {
                    n: n.expect("clap requires n or matrix"),
                    seed,
                },
                strategy,
                verify,
            ),
        },
        Command::Qpath {
            graph,
            q,
            agg,
            mode,
            allow_mask,
            verify,
        } => {
            let g = load(&graph, WeightedDigraph::parse)?;
            let filter = allow_mask.map_or_else(SubsetFilter::none, SubsetFilter::within);
            let cycle = matches!(mode, Shape::Cycle);
            let found = if cycle {
                min_q_cycle(&g, q, agg, &filter)
            } else {
                min_q_path(&g, q, agg, &filter)
            }
            .map_err(|e| e.to_string())?;
            let mut r = Record::new(if found.is_some() { "found" } else { "infeasible" });
            if let Some(p) = &found {
                r.push("cost", p.cost)
                    .list("path", &p.path.vertices)
                    .list("edges", &p.path.edges);
            }
            if verify {
                let b = oracle_budget()?;
                let sub = induced(&g, allow_mask);
                let check = enumerate_q_paths_cycles(&sub, q, agg, cycle, &b).map(|o| match (&found, o) {
                    (None, None) => true,
                    (Some(p), Some(o)) => same_cost(p.cost, o) && same_cost(walk_cost(&g, &p.path, agg), p.cost),
                    _ => false,
                });
                r.verified(check.into());
            }
            Ok(r)
        }
        Command::CubeHam { graph, root, verify } => {
            let ug = load(&graph, WeightedGraph::parse)?;
            let hp = cube_ham_path(&ug, root).map_err(|e| e.to_string())?;
            let mut r = Record::new("found");
            r.list("path", &hp);
            let steps = step_distances(&ug, &hp);
            r.list(
                "steps",
                steps
                    .iter()
                    .map(|d| d.map_or_else(|| ">3".to_string(), |d| d.to_string())),
            );
            if verify {
                r.verified(Verification::Checked(verify_cube_path(&ug, &hp)));
            }
            Ok(r)
        }
        Command::AltPath {
            graph,
            source,
            target,
            agg,
            method,
            verify,
        } => {
            let g = load(&graph, ColoredDigraph::parse)?;
            let (found, mode) = match method {
                AltMethod::Expanded => (alt_path_expanded(&g, source, target, agg), None),
                AltMethod::Twobest => {
                    let mode = if g.is_acyclic() {
                        TwoBestMode::DagTopological
                    } else {
                        TwoBestMode::QueueRelaxation
                    };
                    (alt_path_two_best(&g, source, target, agg, mode), Some(mode))
                }
            };
            let found = found.map_err(|e| e.to_string())?;
            let mut r = Record::new(if found.is_some() { "found" } else { "infeasible" });
            if let Some(mode) = mode {
                r.push(
                    "mode",
                    if mode == TwoBestMode::DagTopological {
                        "dagTopological"
                    } else {
                        "queueRelaxation"
                    },
                );
            }
            if let Some(p) = &found {
                r.push("cost", p.cost)
                    .list("path", &p.path.vertices)
                    .list("edges", &p.path.edges);
            }
            if verify {
                let best = alt_walk_optimum(&g, source, target, agg);
                let ok = match (&found, best) {
                    (None, None) => true,
                    (Some(p), Some(b)) => {
                        verify_alt_path(&g, source, target, &p.path)
                            && same_cost(alt_walk_cost(&g, &p.path, agg), p.cost)
                            && same_cost(p.cost, b)
                    }
                    _ => false,
                };
                r.verified(Verification::Checked(ok));
            }
            Ok(r)
        }
        Command::AltEuler { graph, verify } => {
            let g = load(&graph, ColoredMultigraph::parse)?;
            let built = build_alt_euler(&g);
            let mut r = match &built {
                Ok(cycle) => {
                    let mut r = Record::new("found");
                    r.list("vertices", &cycle.vertices).list("edges", &cycle.edges);
                    r
                }
                Err(reason) => {
                    let mut r = Record::new("infeasible");
                    r.push("reason", reason.name()).push("detail", reason);
                    r
                }
            };
            if verify {
                let check = match &built {
                    Ok(cycle) => Verification::Checked(verify_alt_euler(&g, cycle)),
                    Err(_) => alt_euler_exists(&g, &oracle_budget()?).map(|exists| !exists).into(),
                };
                r.verified(check);
            }
            Ok(r)
        }
    }
}

fn multiplier_text(x: Multiplier) -> String {
    match x {
        Multiplier::Finite(x) => x.to_string(),
        Multiplier::PlusInfinity => "+inf".into(),
        Multiplier::MinusInfinity => "-inf".into(),
    }
}

/// Checks the reported path and compares with the best simple path.
///
/// Walks and simple paths have the same optimum on DAGs and for "minimize,
/// at most"; only there are feasibility and optimality compared directly.
fn verify_bicriteria(
    g: &BiweightedDigraph,
    q: &ConstrainedQuery,
    answer: &BicriteriaAnswer,
    exact: bool,
    budget: &EnumerationBudget,
) -> Verification {
    if let Some(p) = &answer.path {
        let vs = &p.path.vertices;
        let joined = vs.len() == p.path.edges.len() + 1
            && p.path
                .edges
                .iter()
                .zip(vs.windows(2))
                .all(|(&k, w)| k < g.edge_count() && (g.edge(k).from, g.edge(k).to) == (w[0], w[1]));
        let sums = joined
            && p.path.edges.iter().map(|&k| g.edge(k).w1).sum::<u64>() == p.w1sum
            && p.path.edges.iter().map(|&k| g.edge(k).w2).sum::<u64>() == p.w2sum;
        let admitted = match q.sense {
            BudgetSense::AtMost => p.w2sum <= q.budget,
            BudgetSense::AtLeast => p.w2sum >= q.budget,
        };
        if !(sums && vs.first() == Some(&q.source) && vs.last() == Some(&q.target) && admitted) {
            return Verification::Checked(false);
        }
    }
    let opt = match constrained_optimum(g, q, budget) {
        Ok(o) => o,
        Err(e) => return Verification::Skipped(e.to_string()),
    };
    let w1 = answer.path.as_ref().map(|p| p.w1sum);
    let comparable = g.is_acyclic() || (q.objective == Objective::Minimize && q.sense == BudgetSense::AtMost);
    let ok = if comparable {
        match (w1, opt) {
            (None, None) => true,
            (Some(w), Some(o)) if exact => w == o,
            (Some(w), Some(o)) => match q.objective {
                Objective::Minimize => w >= o,
                Objective::Maximize => w <= o,
            },
            _ => false,
        }
    } else {
        match (w1, opt) {
            (Some(w), Some(o)) if exact => w <= o,
            (None, Some(_)) => !exact,
            _ => true,
        }
    };
    Verification::Checked(ok)
}

fn categories(r: &mut Record, c: &ElementClassification) {
    for (v, cat) in c.vertex.iter().enumerate() {
        r.push(format!("vertex[{v}]"), cat);
    }
    for (k, cat) in c.edge.iter().enumerate() {
        r.push(format!("edge[{k}]"), cat);
    }
}

fn tournament<T: Tournament>(t: &T, strategy: Strategy, verify: bool) -> CmdResult {
    let hp = ham_path(t, strategy).map_err(|e| e.to_string())?;
    let mut r = Record::new("found");
    r.push("strategy", strategy)
        .list("path", &hp.order)
        .push("queries", hp.queries);
    if verify {
        r.verified(Verification::Checked(verify_ham_path(t, &hp.order)));
    }
    Ok(r)
}

/// Subgraph induced by the vertices of `mask` (all when `None`), renumbered
/// in increasing order.
fn induced(g: &WeightedDigraph, mask: Option<u32>) -> WeightedDigraph {
    let keep: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| mask.is_none_or(|m| v < 32 && m >> v & 1 == 1))
        .collect();
    let mut index = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in keep.iter().enumerate() {
        index[v] = i;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| index[e.from] != usize::MAX && index[e.to] != usize::MAX)
        .map(|e| WeightedEdge {
            from: index[e.from],
            to: index[e.to],
            weight: e.weight,
        })
        .collect();
    let costs = g.vertex_costs().map(|c| keep.iter().map(|&v| c[v]).collect());
    WeightedDigraph::with_vertex_costs(keep.len(), edges, costs).expect("subgraph of a valid graph")
}

/// Item list: one `w` or `w cost` per line, `#` comments and blank lines
/// skipped. With `costs`, every line must carry a cost.
fn parse_items(text: &str, costs: bool) -> Result<(Vec<u64>, Option<Vec<u64>>), String> {
    let mut weights = Vec::new();
    let mut item_costs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |tok: &str, what: &str| {
            tok.parse::<u64>()
                .map_err(|_| format!("line {}: invalid {what} {tok:?}", i + 1))
        };
        match toks.as_slice() {
            [w] if !costs => weights.push(num(w, "weight")?),
            [w, c] => {
                weights.push(num(w, "weight")?);
                item_costs.push(num(c, "cost")?);
            }
            _ if costs => return Err(format!("line {}: expected 'w cost'", i + 1)),
            _ => return Err(format!("line {}: expected 'w [cost]'", i + 1)),
        }
    }
    Ok((weights, costs.then_some(item_costs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn item_lists() {
        assert_eq!(parse_items("# w\n2\n\n3\n", false).unwrap(), (vec![2, 3], None));
        assert_eq!(parse_items("2 1\n3 4\n", true).unwrap(), (vec![2, 3], Some(vec![1, 4])));
        assert_eq!(parse_items("2\n", true).unwrap_err(), "line 1: expected 'w cost'");
        assert_eq!(
            parse_items("2\nx\n", false).unwrap_err(),
            "line 2: invalid weight \"x\""
        );
    }

    #[test]
    fn flag_values() {
        assert_eq!(parse_mask("0x6"), Ok(6));
        assert_eq!(parse_mask("12"), Ok(12));
        assert!(parse_mask("0xg").is_err());
        assert_eq!(parse_cap("unbounded"), Ok(UNBOUNDED));
        assert_eq!(parse_cap("3"), Ok(3));
        assert!(parse_cap("1").is_err());
        assert_eq!(parse_strategy("binary-insertion"), Ok(Strategy::BinaryInsertion));
    }

    #[test]
    fn induced_subgraph_renumbers() {
        let g = WeightedDigraph::parse("3 3 V\n5 6 7\n0 1 1\n1 2 2\n2 0 3\n").unwrap();
        let sub = induced(&g, Some(0b110));
        assert_eq!(sub.vertex_count(), 2);
        assert_eq!(
            sub.edges(),
            &[WeightedEdge {
                from: 0,
                to: 1,
                weight: 2.0
            }]
        );
        assert_eq!(sub.vertex_costs(), Some(&[6.0, 7.0][..]));
    }
}
