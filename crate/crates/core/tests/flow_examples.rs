use dflow_core::complex::from_simplicial;
use dflow_core::fixtures;
use dflow_core::homalg::{nerve_chain_complex, order_complex_homology, same_homology};
use dflow_core::io::{homology_json, parse_complex, parse_field};
use dflow_core::morse::critical_cells;
use dflow_core::random::random_instance;
use dflow_core::spectral::{e2_page, spectral_sequence, DoubleComplex};
use dflow_core::verify::verify_flow;
use dflow_core::{AbelianGroup, Coefficients, FlowCategory, GradientVectorField, MorsePath};

fn flows() -> Vec<(&'static str, FlowCategory)> {
    let mk = |(cx, v)| FlowCategory::new(cx, v);
    vec![("D3", mk(fixtures::d3())), ("T2", mk(fixtures::torus())), ("S2", mk(fixtures::sphere()))]
}

#[test]
fn composition_is_associative_and_closed() {
    for (name, flow) in flows() {
        let homs: Vec<((usize, usize), Vec<&MorsePath>)> =
            flow.homs().iter().map(|(&k, h)| (k, h.morphisms().iter().collect())).collect();
        let mut triples = 0;
        for &((w, v), ref ps) in &homs {
            for &((v2, u), ref qs) in &homs {
                if v2 != v {
                    continue;
                }
                for &((u2, z), ref rs) in &homs {
                    if u2 != u {
                        continue;
                    }
                    for p in ps {
                        for q in qs {
                            let qp = flow.compose(p, q).unwrap();
                            assert!(flow.hom(w, u).unwrap().index_of(&qp).is_some(), "{name}: composite outside Hom");
                            for r in rs {
                                let left = flow.compose(&qp, r).unwrap();
                                let right = flow.compose(p, &flow.compose(q, r).unwrap()).unwrap();
                                assert_eq!(left, right, "{name}");
                                assert!(flow.hom(w, z).unwrap().index_of(&left).is_some());
                                triples += 1;
                            }
                        }
                    }
                }
            }
        }
        if name == "D3" {
            // only f -> t -> x composes, and there are no triples
            assert_eq!(triples, 0);
        }
    }
}

#[test]
fn factorizations_round_trip() {
    for (_, flow) in flows() {
        let crit: Vec<usize> = flow.critical().to_vec();
        for h in flow.homs().values() {
            for p in h.morphisms() {
                let factors = flow.factorize(p);
                for f in &factors {
                    assert!(f.cells()[1..f.len() - 1].iter().all(|c| !crit.contains(c)));
                }
                let mut acc = factors[0].clone();
                for f in &factors[1..] {
                    acc = flow.compose(&acc, f).unwrap();
                }
                assert_eq!(&acc, p);
            }
        }
    }
}

#[test]
fn opposite_hom_posets_have_the_same_nerve_homology() {
    for (_, flow) in flows() {
        for h in flow.homs().values() {
            let p = h.poset();
            assert_eq!(
                order_complex_homology(p, Coefficients::Integers),
                order_complex_homology(&p.opposite(), Coefficients::Integers)
            );
        }
    }
}

#[test]
fn entrance_path_category_of_an_interval() {
    let (_, cx) = from_simplicial(&[vec![0, 1]]).unwrap();
    let v = GradientVectorField::empty(&cx);
    let flow = FlowCategory::new(cx, v);
    let cat = flow.export_category().unwrap();
    assert_eq!((cat.object_count(), cat.arrow_count()), (3, 2));
    let h = nerve_chain_complex(&cat, 3).unwrap().homology(Coefficients::Integers);
    assert!(h.iter().skip(2).all(AbelianGroup::is_zero));
}

#[test]
fn d3_export_nerve_vanishes_above_one() {
    let (cx, v) = fixtures::d3();
    let cat = FlowCategory::new(cx, v).export_category().unwrap();
    let h = nerve_chain_complex(&cat, 4).unwrap().homology(Coefficients::Integers);
    // the nerve has no 3-simplices, so degree 3 is absent rather than zero
    assert_eq!(h.len(), 3);
    assert!(h[2].is_zero());
}

#[test]
fn bundled_json_drives_the_pipeline() {
    let cx = parse_complex(fixtures::D3_COMPLEX).unwrap();
    let v = parse_field(&cx, fixtures::D3_FIELD).unwrap();
    assert_eq!(critical_cells(&cx, &v), vec!["f", "t", "x"]);
    let s = spectral_sequence(&FlowCategory::new(cx, v), Coefficients::Integers).unwrap();
    let j = homology_json(&s.homology);
    assert_eq!(j["H"][0]["free"], 1);
    assert_eq!(j["H"].as_array().unwrap().len(), 4);
}

#[test]
fn verification_reports_pass_on_fixtures() {
    for (name, flow) in flows() {
        let r = verify_flow(&flow, 3).unwrap();
        assert!(r.finite_directed && r.unique_factorization.pass && r.level_one_factorization.pass, "{name}");
        assert!(r.nerve_vanishing && r.collapse.as_ref().is_some_and(|c| c.pass), "{name}");
        if name == "D3" {
            assert_eq!(r.collapse.unwrap().counts, vec![3, 22]);
        }
    }
}

#[test]
fn random_instances_agree_over_z_and_q() {
    for seed in 100..130 {
        let (cx, v) = random_instance(seed, 20);
        let flow = FlowCategory::new(cx, v);
        let dc = DoubleComplex::build(&flow).unwrap();
        let z = e2_page(&dc, Coefficients::Integers).unwrap();
        let q = e2_page(&dc, Coefficients::Rationals).unwrap();
        for (k, g) in &z.entries {
            assert_eq!(&g.rationalize(), &q.entries[k], "seed {seed} at {k:?}");
        }
    }
}

#[test]
fn circle_homology_from_the_flow_category() {
    let (cx, v) = fixtures::circle();
    let oracle = order_complex_homology(&cx.face_poset(), Coefficients::Integers);
    let s = spectral_sequence(&FlowCategory::new(cx, v), Coefficients::Integers).unwrap();
    assert!(same_homology(&s.homology, &oracle));
    assert_eq!(oracle, vec![AbelianGroup::free(1), AbelianGroup::free(1)]);
}
