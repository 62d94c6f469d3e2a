use dlab::closures::{closure, iterated_closure, rank, sequential_convexify, Rank};
use dlab::disjunctions::{DisjunctionFamily, IntegralityPattern};
use dlab::instances::{b_polytope, gen_k3_copies, gen_tetra_h, random_01_polytope, stable_set_polytope, GraphSpec};
use dlab::kernel::{enumerate_vertices, is_subset, HPolytope};
use dlab::{Inequality, Polytope, Rational, Scalar};

fn q(n: i64) -> Rational {
    Rational::int(n)
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn variable(n: usize) -> DisjunctionFamily {
    DisjunctionFamily::variable(IntegralityPattern::all_integral(n))
}

fn same_set(a: &Polytope, b: &Polytope) -> bool {
    is_subset(a, b).unwrap() && is_subset(b, a).unwrap()
}

#[test]
fn integral_polytopes_are_fixed_points() {
    let cube = HPolytope::unit_cube(3);
    assert!(same_set(&closure(&cube, &variable(3), None).unwrap(), &cube));
    let hull = stable_set_polytope(&GraphSpec::complete(3)).unwrap().polytope;
    let hull = hull.with(Inequality::from_ints(&[1, 1, 1], 1));
    assert!(same_set(&closure(&hull, &variable(3), None).unwrap(), &hull));
}

#[test]
fn triangle_closure_has_the_clique_facet() {
    let p = gen_k3_copies(1).unwrap().polytope;
    let c = closure(&p, &variable(3), None).unwrap();
    assert!(c.ineqs.contains(&Inequality::from_ints(&[1, 1, 1], 1)), "{:?}", c.ineqs);
    assert_eq!(
        rank(&p, &variable(3), &Inequality::from_ints(&[1, 1, 1], 1), 5).unwrap(),
        Rank::Finite(1)
    );
    assert_eq!(
        rank(&p, &variable(3), &Inequality::from_ints(&[1, 1, 0], 1), 5).unwrap(),
        Rank::Finite(0)
    );
}

#[test]
fn b_polytope_trajectory() {
    let chain = iterated_closure(&b_polytope(), &variable(2), 8).unwrap();
    assert_eq!(chain.len(), 9);
    let diff = [q(1), q(-1)];
    for (r, p) in chain.iter().enumerate() {
        // the gap closes like 1/(r+2) but never reaches zero
        assert_eq!(p.max_of(&diff).unwrap(), Some(frac(1, r as i64 + 2)), "round {r}");
    }
    let after_two = enumerate_vertices(&chain[2]).unwrap();
    assert!(after_two.vertices.contains(&vec![frac(5, 4), q(1)]));
    assert!(after_two.vertices.contains(&vec![q(1), frac(5, 4)]));
    assert_eq!(
        rank(&b_polytope(), &variable(2), &Inequality::from_ints(&[1, -1], 0), 10).unwrap(),
        Rank::Exceeds(10)
    );
}

/// Height of a polytope over the column `x_1 = x_2 = t`.
fn column_height(p: &Polytope, t: &Rational) -> Rational {
    let column = p
        .with(Inequality::new(vec![q(1), q(0), q(0)], t.clone()))
        .with(Inequality::new(vec![q(-1), q(0), q(0)], -t.clone()))
        .with(Inequality::new(vec![q(0), q(1), q(0)], t.clone()))
        .with(Inequality::new(vec![q(0), q(-1), q(0)], -t.clone()));
    column.max_of(&[q(0), q(0), q(1)]).unwrap().unwrap()
}

#[test]
fn tetra_first_round_matches_the_decay_formula() {
    for h in [4, 16] {
        let inst = gen_tetra_h(&q(h)).unwrap();
        let hq = q(h);
        let t = q(1) - frac(1, h);
        let chain = iterated_closure(&inst.polytope, &variable(3), 3).unwrap();
        let heights: Vec<Rational> = chain.iter().map(|p| column_height(p, &t)).collect();
        assert_eq!(heights[0], hq);
        let step = |hp: &Rational| hp - std::cmp::max(hp * q(2) / (&hq + q(1)), q(1));
        assert_eq!(heights[1], step(&heights[0]), "h = {h}");
        // later rounds: the formula is a lower bound on what survives
        for w in heights.windows(2) {
            assert!(w[1] >= step(&w[0]));
            assert!(w[1] < w[0]);
        }
    }
}

#[test]
fn sequential_convexification_of_cliques() {
    for m in 3..=4 {
        let p = stable_set_polytope(&GraphSpec::complete(m)).unwrap().polytope;
        let order: Vec<usize> = (0..m - 2).collect();
        let chain = sequential_convexify(&p, &order).unwrap();
        for (i, pi) in chain.iter().enumerate() {
            let mut expected = HPolytope::unit_cube(m);
            for u in i..m {
                for v in u + 1..m {
                    let mut a = vec![0; m];
                    for x in a.iter_mut().take(i) {
                        *x = 1;
                    }
                    a[u] = 1;
                    a[v] = 1;
                    expected.ineqs.push(Inequality::from_ints(&a, 1));
                }
            }
            assert!(same_set(pi, &expected), "m = {m}, i = {i}");
        }
        // the last member is the integer hull
        let verts = enumerate_vertices(chain.last().unwrap()).unwrap();
        assert!(verts.iter().all(|v| v.iter().all(|x| x.is_integral())));
    }
}

#[test]
fn full_convexification_gives_the_integer_hull() {
    for seed in 0..6 {
        let inst = random_01_polytope(seed, 4, 0.5).unwrap();
        let order: Vec<usize> = (0..4).collect();
        let last = sequential_convexify(&inst.polytope, &order).unwrap().pop().unwrap();
        let verts = enumerate_vertices(&last).unwrap();
        let lattice = inst.lattice_points().unwrap();
        let mut vs = verts.vertices.clone();
        vs.sort();
        let mut ls = lattice.clone();
        ls.sort();
        // every vertex is a 0/1 point of P and every 0/1 point of P survives
        assert!(vs.iter().all(|v| ls.contains(v)), "seed {seed}");
        assert!(ls.iter().all(|x| last.contains(x)), "seed {seed}");
    }
}

#[test]
fn closures_keep_the_lattice_points() {
    for seed in 0..5 {
        let inst = random_01_polytope(seed, 3, 0.6).unwrap();
        let chain = iterated_closure(&inst.polytope, &variable(3), 2).unwrap();
        for p in &chain {
            for x in inst.lattice_points().unwrap() {
                assert!(p.contains(&x));
            }
        }
    }
}

#[test]
fn zero_rounds() {
    let p = b_polytope();
    assert_eq!(iterated_closure(&p, &variable(2), 0).unwrap(), vec![p]);
}
