use dimerlab::error::Error;
use dimerlab::graph::{EmbeddedGraph, VertexId};
use dimerlab::kasteleyn::KasteleynSystem;
use dimerlab::moves::{
    contract, leaf_trim, parallel_reduce, square_move, square_weights, verify_all_untouched,
    MoveCertificate, SquareWeights,
};
use dimerlab::oracle::{oracle_partition, OracleCaps};
use dimerlab::scalar::{rat, Rational};
use dimerlab::zoo::{
    attach_pendant, four_cycle, is_ladder, randomize_weights, snake_graph, snake_reduce, GridSpec,
};
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Q = Rational;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Z(after) = |factor| Z(before)` against enumeration, plus preservation
/// of every edge away from the move up to the recorded gauges.
fn certify(c: &MoveCertificate<Q>) {
    let caps = OracleCaps::default();
    let before = oracle_partition(&c.before, caps).unwrap().abs();
    let after = oracle_partition(&c.after, caps).unwrap().abs();
    assert_eq!(after, c.factor.abs() * before);
    for r in verify_all_untouched(c).unwrap() {
        assert!(r.passed, "P changed on {}", r.edge);
    }
}

#[test]
fn square_move_on_every_grid_face() {
    for n in 1..=2 {
        let g = randomize_weights(
            &GridSpec::<Q>::uniform(3, n).build().unwrap(),
            &mut rng(n as u64),
        );
        for f in g.bounded_faces() {
            certify(&square_move(&g, f.id).unwrap());
        }
    }
}

#[test]
fn square_move_on_isolated_square_halves_the_weights() {
    let i = || dimerlab::matrix::Matrix::<Q>::identity(1);
    let g = four_cycle(i(), i(), i(), i()).unwrap();
    let c = square_move(&g, g.bounded_faces().next().unwrap().id).unwrap();
    assert_eq!(c.factor.abs(), rat(1, 2));
    let z = KasteleynSystem::new(&c.after).unwrap().partition_function();
    assert_eq!(z, rat(1, 1));
}

#[test]
fn contraction_and_parallel_merge_on_a_snake() {
    for n in 1..=2 {
        let g = randomize_weights(&snake_graph::<Q>("NE", n).unwrap(), &mut rng(20 + n as u64));
        let red = snake_reduce(&g).unwrap();
        assert!(is_ladder(&red.result));
        for step in &red.steps {
            certify(step);
        }
    }
}

#[test]
fn leaf_trim_removes_a_pendant_path() {
    for n in 1..=2 {
        let g = randomize_weights(
            &GridSpec::<Q>::uniform(2, n).build().unwrap(),
            &mut rng(30 + n as u64),
        );
        let h = attach_pendant(&g, VertexId(0), 0).unwrap();
        let e = h
            .edge_by_name(&format!("{}.e2", g.vertex(VertexId(0)).name))
            .unwrap();
        let c = leaf_trim(&h, e).unwrap();
        assert!(c.factor.is_one());
        certify(&c);
    }
}

#[test]
fn contraction_rejects_a_center_with_one_neighbour() {
    let g = snake_graph::<Q>("E", 1).unwrap();
    let deg3 = (0..g.num_vertices())
        .map(VertexId)
        .find(|&v| g.vertex(v).degree() == 3)
        .unwrap();
    assert!(contract(&g, deg3).is_err());
}

#[test]
fn parallel_reduce_needs_two_edges() {
    let g = snake_graph::<Q>("E", 1).unwrap();
    let e = &g.edges()[0];
    assert!(parallel_reduce(&g, e.white, e.black).is_err());
}

#[test]
fn singular_square_is_reported() {
    let m = |x: i64| dimerlab::matrix::Matrix::<Q>::from_i64_rows(&[&[x]]);
    let w = SquareWeights {
        a: m(1),
        b: m(1),
        c: m(1),
        d: m(-1),
    };
    assert!(matches!(square_weights(&w), Err(Error::Singular(_))));
}

fn snake_words() -> [&'static str; 6] {
    ["NE", "EN", "NEN", "ENE", "NNEE", "ENEN"]
}

#[test]
fn snakes_reduce_to_ladders_preserving_kept_edges() {
    for word in snake_words() {
        for n in [1, 3] {
            let g: EmbeddedGraph<Q> =
                randomize_weights(&snake_graph::<Q>(word, n).unwrap(), &mut rng(40));
            let red = snake_reduce(&g).unwrap();
            assert!(is_ladder(&red.result), "{word} n={n}");
            let z = |h: &EmbeddedGraph<Q>| KasteleynSystem::new(h).unwrap().partition_function();
            let factor = red.steps.iter().fold(Q::one(), |a, s| a * s.factor.abs());
            assert_eq!(z(&red.result), factor * z(&g), "{word} n={n}");
            for e in red.result.edges() {
                if g.edge_by_name(&e.name).is_ok() {
                    assert!(
                        red.verify_edge(&e.name).unwrap().passed,
                        "{word} n={n}: {}",
                        e.name
                    );
                }
            }
        }
    }
}
