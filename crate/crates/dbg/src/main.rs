use lineup::harness::{generate_instance, Family, GeneratorSpec};
use lineup::exact::{optimal_matching, brute_force_optimal};
use lineup::Matching;

fn main() {
    let seed = 5242773009762098523u64;
    for family in [Family::EuclideanBox { dim: 2 }, Family::RandomMetric] {
        for l in 1..=3usize {
            let inst = generate_instance(&GeneratorSpec {
                family: family.clone(),
                n_voters: 1,
                m_candidates: 5,
                n_positions: l,
                seed,
                set_positions: None,
            }).unwrap();
            let fast = optimal_matching(&inst);
            let brute = brute_force_optimal(&inst).unwrap();
            if fast != brute {
                println!("family {:?} l={} fast {:?} brute {:?}", family, l, fast.assignment(), brute.assignment());
                let cf = inst.cost_of_matching(&fast).unwrap().total;
                let cb = inst.cost_of_matching(&brute).unwrap().total;
                println!("cost fast {:.17e} brute {:.17e} diff {:e}", cf, cb, cf - cb);
                for a in [vec![3,2], vec![1,2]] {
                    let m = Matching::new(a.clone(), 5).unwrap();
                    println!("  {:?}: cost {:.17e}", a, inst.cost_of_matching(&m).unwrap().total);
                }
            }
        }
    }
}
