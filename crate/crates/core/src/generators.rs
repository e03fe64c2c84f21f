//! Deterministic instance generators for the bundled fixture domains.
//!
//! Every problem file under `fixtures/` is produced by one of these functions;
//! the parameters are encoded in the problem name.

use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GRIPPER_DOMAIN: &str = include_str!("../fixtures/gripper/domain.pddl");
pub const BLOCKSWORLD_DOMAIN: &str = include_str!("../fixtures/blocksworld/domain.pddl");
pub const SPANNER_DOMAIN: &str = include_str!("../fixtures/spanner/domain.pddl");
pub const MOVIE_DOMAIN: &str = include_str!("../fixtures/movie/domain.pddl");
pub const LOGISTICS_DOMAIN: &str = include_str!("../fixtures/logistics/domain.pddl");
pub const PAIRING_DOMAIN: &str = include_str!("../fixtures/pairing/domain.pddl");

fn problem(name: &str, domain: &str, objects: &[(String, &str)], init: &[String], goal: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {name})");
    let _ = writeln!(out, "  (:domain {domain})");
    out.push_str("  (:objects");
    for (o, t) in objects {
        let _ = write!(out, "\n    {o} - {t}");
    }
    out.push_str(")\n  (:init");
    for p in init {
        let _ = write!(out, "\n    {p}");
    }
    out.push_str(")\n  (:goal (and");
    for g in goal {
        let _ = write!(out, "\n    {g}");
    }
    out.push_str("))\n)\n");
    out
}

/// `n` balls in `rooma`, robot in `rooma`, both grippers free; all balls must reach `roomb`.
pub fn gripper(n: usize) -> String {
    let mut objects = vec![
        ("rooma".to_string(), "room"),
        ("roomb".to_string(), "room"),
        ("left".to_string(), "gripper"),
        ("right".to_string(), "gripper"),
    ];
    let mut init = vec![
        "(at-robby rooma)".to_string(),
        "(adjacent rooma roomb)".to_string(),
        "(adjacent roomb rooma)".to_string(),
        "(free left)".to_string(),
        "(free right)".to_string(),
    ];
    let mut goal = Vec::new();
    for i in 1..=n {
        objects.push((format!("ball{i}"), "ball"));
        init.push(format!("(at ball{i} rooma)"));
        goal.push(format!("(at ball{i} roomb)"));
    }
    problem(&format!("gripper-n{n}"), "gripper", &objects, &init, &goal)
}

/// A gripper instance whose goal needs a false static fact.
pub fn gripper_unsolvable() -> String {
    gripper(1)
        .replace("(problem gripper-n1)", "(problem gripper-unsolvable)")
        .replace("(at ball1 roomb)", "(at ball1 roomb)\n    (adjacent rooma rooma)")
}

fn towers_facts(towers: &[Vec<usize>], goal: bool) -> Vec<String> {
    let mut facts = Vec::new();
    for tower in towers {
        for (i, &b) in tower.iter().enumerate() {
            if i == 0 {
                facts.push(format!("(ontable b{b})"));
            } else {
                facts.push(format!("(on b{b} b{})", tower[i - 1]));
            }
        }
        if !goal {
            if let Some(&top) = tower.last() {
                facts.push(format!("(clear b{top})"));
            }
        }
    }
    facts
}

/// Blocks `b1..bn`; towers are listed bottom to top. Goal facts are `on`/`ontable` only.
pub fn blocksworld(name: &str, init: &[Vec<usize>], goal: &[Vec<usize>]) -> String {
    let n = init.iter().map(Vec::len).sum::<usize>();
    let objects: Vec<(String, &str)> = (1..=n).map(|i| (format!("b{i}"), "block")).collect();
    let mut init_facts = towers_facts(init, false);
    init_facts.insert(0, "(handempty)".to_string());
    problem(name, "blocksworld", &objects, &init_facts, &towers_facts(goal, true))
}

fn random_towers(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut blocks: Vec<usize> = (1..=n).collect();
    blocks.shuffle(rng);
    let mut towers: Vec<Vec<usize>> = Vec::new();
    for b in blocks {
        if towers.is_empty() || rng.gen_bool(0.4) {
            towers.push(vec![b]);
        } else {
            let i = rng.gen_range(0..towers.len());
            towers[i].push(b);
        }
    }
    towers
}

/// Random initial and goal towers over `n` blocks.
pub fn blocksworld_random(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init = random_towers(n, &mut rng);
    let goal = random_towers(n, &mut rng);
    blocksworld(&format!("blocksworld-n{n}-s{seed}"), &init, &goal)
}

/// Where spanners start in a spanner instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpannerPlacement {
    /// Every spanner at `location1`.
    Together,
    /// Spanner `i` at `location(1 + i mod locations)`.
    Spread,
}

/// Chain `shed → location1 → … → location<l> → gate`; man at `shed`, nuts at `gate`.
pub fn spanner(spanners: usize, nuts: usize, locations: usize, placement: SpannerPlacement) -> String {
    assert!(locations >= 1);
    let mut objects = vec![("bob".to_string(), "man"), ("shed".to_string(), "location"), ("gate".to_string(), "location")];
    let mut init = vec!["(at bob shed)".to_string()];
    let mut chain = vec!["shed".to_string()];
    for l in 1..=locations {
        objects.push((format!("location{l}"), "location"));
        chain.push(format!("location{l}"));
    }
    chain.push("gate".to_string());
    for w in chain.windows(2) {
        init.push(format!("(link {} {})", w[0], w[1]));
    }
    for s in 1..=spanners {
        objects.push((format!("spanner{s}"), "spanner"));
        let loc = match placement {
            SpannerPlacement::Together => 1,
            SpannerPlacement::Spread => 1 + (s - 1) % locations,
        };
        init.push(format!("(at spanner{s} location{loc})"));
        init.push(format!("(useable spanner{s})"));
    }
    let mut goal = Vec::new();
    for n in 1..=nuts {
        objects.push((format!("nut{n}"), "nut"));
        init.push(format!("(at nut{n} gate)"));
        init.push(format!("(loose nut{n})"));
        goal.push(format!("(tightened nut{n})"));
    }
    let tag = match placement {
        SpannerPlacement::Together => "t",
        SpannerPlacement::Spread => "s",
    };
    problem(
        &format!("spanner-s{spanners}-n{nuts}-l{locations}-{tag}"),
        "spanner",
        &objects,
        &init,
        &goal,
    )
}

/// `n` objects of each snack type.
pub fn movie(n: usize) -> String {
    let kinds = ["chips", "dip", "pop", "cheese", "crackers"];
    let mut objects = Vec::new();
    let mut init = vec!["(counter-at-other-than-two-hours)".to_string()];
    for kind in kinds {
        for i in 1..=n {
            objects.push((format!("{kind}{i}"), kind));
            init.push(format!("({kind} {kind}{i})"));
        }
    }
    let mut goal = vec!["(movie-rewound)".to_string(), "(counter-at-zero)".to_string()];
    goal.extend(kinds.iter().map(|k| format!("(have-{k})")));
    problem(&format!("movie-n{n}"), "movie", &objects, &init, &goal)
}

/// `cities` cities each with an airport and a post office served by one truck;
/// one airplane at `apt1`; package `j` starts at `office(j mod c)` and must
/// reach `office(j+1 mod c)`.
pub fn logistics(cities: usize, packages: usize) -> String {
    assert!(cities >= 1);
    let mut objects = vec![("plane1".to_string(), "airplane")];
    let mut init = vec!["(at plane1 apt1)".to_string()];
    for c in 1..=cities {
        objects.push((format!("city{c}"), "city"));
        objects.push((format!("apt{c}"), "airport"));
        objects.push((format!("office{c}"), "location"));
        objects.push((format!("truck{c}"), "truck"));
        init.push(format!("(in-city apt{c} city{c})"));
        init.push(format!("(in-city office{c} city{c})"));
        init.push(format!("(at truck{c} office{c})"));
    }
    let mut goal = Vec::new();
    for j in 1..=packages {
        objects.push((format!("pkg{j}"), "package"));
        init.push(format!("(at pkg{j} office{})", 1 + (j - 1) % cities));
        if cities == 1 {
            goal.push(format!("(at pkg{j} apt1)"));
        } else {
            goal.push(format!("(at pkg{j} office{})", 1 + j % cities));
        }
    }
    problem(&format!("logistics-c{cities}-p{packages}"), "logistics", &objects, &init, &goal)
}

/// `n` plugs and sockets, `plug_i` linked to `socket_i`; goal joins each linked pair.
pub fn pairing(n: usize) -> String {
    let mut objects = Vec::new();
    let mut init = Vec::new();
    let mut goal = Vec::new();
    for i in 1..=n {
        objects.push((format!("plug{i}"), "plug"));
        objects.push((format!("socket{i}"), "socket"));
        init.push(format!("(linked plug{i} socket{i})"));
        init.push(format!("(ready plug{i})"));
        init.push(format!("(open socket{i})"));
        goal.push(format!("(joined plug{i} socket{i})"));
    }
    problem(&format!("pairing-n{n}"), "pairing", &objects, &init, &goal)
}

/// A named fixture: domain text, problem text.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub domain_name: &'static str,
    pub domain: &'static str,
    pub problem: String,
}

impl Fixture {
    fn new(domain_name: &'static str, domain: &'static str, problem: String) -> Self {
        Fixture {
            domain_name,
            domain,
            problem,
        }
    }

    pub fn load(&self) -> crate::pddl::LiftedProblem {
        crate::pddl::load(self.domain, &self.problem).expect("bundled fixtures parse")
    }
}

/// The desk-scale corpus shipped under `fixtures/` (solvable instances only).
pub fn corpus() -> Vec<Fixture> {
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push(Fixture::new("gripper", GRIPPER_DOMAIN, gripper(n)));
    }
    out.push(Fixture::new(
        "blocksworld",
        BLOCKSWORLD_DOMAIN,
        blocksworld("blocksworld-3-reverse", &[vec![1, 2, 3]], &[vec![3, 2, 1]]),
    ));
    out.push(Fixture::new(
        "blocksworld",
        BLOCKSWORLD_DOMAIN,
        blocksworld("blocksworld-3-flat", &[vec![1], vec![2], vec![3]], &[vec![1, 2, 3]]),
    ));
    for (n, seed) in [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (5, 1), (5, 2)] {
        out.push(Fixture::new("blocksworld", BLOCKSWORLD_DOMAIN, blocksworld_random(n, seed)));
    }
    for (s, n, l, p) in [
        (1, 1, 1, SpannerPlacement::Together),
        (2, 1, 1, SpannerPlacement::Together),
        (3, 2, 1, SpannerPlacement::Together),
        (2, 2, 2, SpannerPlacement::Spread),
        (3, 2, 2, SpannerPlacement::Spread),
        (4, 3, 3, SpannerPlacement::Spread),
    ] {
        out.push(Fixture::new("spanner", SPANNER_DOMAIN, spanner(s, n, l, p)));
    }
    for n in 1..=3 {
        out.push(Fixture::new("movie", MOVIE_DOMAIN, movie(n)));
    }
    for (c, p) in [(1, 1), (2, 1), (2, 2)] {
        out.push(Fixture::new("logistics", LOGISTICS_DOMAIN, logistics(c, p)));
    }
    for n in 1..=3 {
        out.push(Fixture::new("pairing", PAIRING_DOMAIN, pairing(n)));
    }
    out
}
