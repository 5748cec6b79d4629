use ftspan::gen::{generate, pick_sources, Model};
use ftspan::graph::Graph;
use ftspan::sourcewise::{build_h4, build_h8};
use ftspan::spanner::{ceil_cbrt, Tag};
use ftspan::verify::check_stretch;

fn dep_edges(s: &ftspan::spanner::Spanner) -> usize {
    s.provenance
        .values()
        .filter(|t| t.contains(&Tag::Dep))
        .count()
}

fn main() {
    // search small graphs for a fixture with dependent AND independent
    // far-fault candidates for S = {0, 1}
    println!("--- small fixture search (n=8..10) ---");
    let mut shown = 0;
    'small: for n in [8usize, 9, 10] {
        for p10 in [35usize, 40, 45, 50, 55] {
            let p = p10 as f64 / 100.0;
            for seed in 0..400u64 {
                let Ok(g) = generate(&Model::Gnp { n, p }, seed) else {
                    continue;
                };
                if g.n() < n {
                    continue;
                }
                let Ok(b) = build_h4(&g, &[0, 1], 7) else {
                    continue;
                };
                let dep = dep_edges(&b.spanner);
                let indep = b.spanner.buy_log.len();
                let buys = b.spanner.buy_log.iter().filter(|r| r.bought).count();
                if dep >= 1 && indep >= 1 {
                    let maxdeg = (0..g.n()).map(|v| g.degree(v)).max().unwrap();
                    println!(
                        "n={n} p={p} seed={seed}: dep={dep} indep={indep} buys={buys} m={} maxdeg={maxdeg}",
                        g.m()
                    );
                    let ok4 = check_stretch(&g, &b.spanner.edges, 4, Some(&[0, 1]))
                        .unwrap()
                        .passed();
                    let b8 = build_h8(&g, &[0, 1], 7).unwrap();
                    let ok8 = check_stretch(&g, &b8.spanner.edges, 8, Some(&[0, 1]))
                        .unwrap()
                        .passed();
                    println!("    stretch4={ok4} stretch8={ok8} edges: {:?}", g.edges());
                    shown += 1;
                    if shown >= 6 {
                        break 'small;
                    }
                }
            }
        }
    }

    println!("--- candidate census on mid-size graphs ---");
    for (n, deg) in [(48usize, 9.0f64), (64, 10.0), (80, 12.0), (96, 12.0)] {
        let p = deg / (n as f64 - 1.0);
        let mut tot_cand = 0;
        let mut tot_dep = 0;
        let mut max_cost = 0;
        let mut costly = 0;
        for seed in 0..12u64 {
            let Ok(g) = generate(&Model::Gnp { n, p }, seed) else {
                continue;
            };
            let k = ceil_cbrt(g.n());
            let s = pick_sources(&g, k).unwrap();
            let Ok(b) = build_h8(&g, &s, seed) else {
                continue;
            };
            tot_cand += b.spanner.buy_log.len();
            tot_dep += dep_edges(&b.spanner);
            for r in &b.spanner.buy_log {
                max_cost = max_cost.max(r.cost);
                if r.cost >= 5 {
                    costly += 1;
                }
            }
        }
        println!(
            "n={n} deg~{deg}: candidates={tot_cand} dep_edges={tot_dep} max_cost={max_cost} costly={costly}"
        );
    }

    // a hand-built long-detour instance to see the costly branch directly:
    // a spine with shortcut ladders plus a long parallel arc
    println!("--- crafted long-detour ---");
    let g = long_detour();
    let s = vec![0usize, 1];
    let b = build_h8(&g, &s, 3).unwrap();
    println!(
        "crafted: candidates={} dep={} max_cost={:?}",
        b.spanner.buy_log.len(),
        dep_edges(&b.spanner),
        b.spanner.buy_log.iter().map(|r| r.cost).max()
    );
    for r in &b.spanner.buy_log {
        println!(
            "   s={} t={} v={} cost={} val={} bought={}",
            r.s, r.t, r.fault, r.cost, r.value, r.bought
        );
    }
}

fn long_detour() -> Graph {
    // spine 0-2-3-4-5-6-7(t), arc 2-8-9-10-11-12-7, spurs to give arc
    // vertices a third neighbor so their arc edges can escape the clustering
    let mut e = vec![
        (0, 1),
        (0, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 6),
        (6, 7),
        (2, 8),
        (8, 9),
        (9, 10),
        (10, 11),
        (11, 12),
        (12, 7),
    ];
    // spur triangles onto the arc
    e.extend([(8, 13), (9, 13), (10, 14), (11, 14), (12, 15), (7, 15), (1, 3)]);
    Graph::new(16, &e).unwrap()
}
