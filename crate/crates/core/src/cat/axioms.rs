use super::{AbCat, Morphism, ObjId};

/// A failed category law, with the objects and generator indices that
/// witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub law: &'static str,
    pub objects: Vec<ObjId>,
    pub generators: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies that composition respects relations, is unital, and is
/// associative on all generator triples.
pub fn check_category_axioms(cat: &AbCat) -> AxiomReport {
    let mut report = AxiomReport::default();
    let objs: Vec<ObjId> = cat.objects().collect();
    let gen = |a, b, u| cat.generator(a, b, u);

    for &a in &objs {
        for &b in &objs {
            let hab = cat.hom(a, b);
            for u in 0..hab.generator_count() {
                let f = gen(a, b, u);
                report.checked += 2;
                if !cat.equal(&cat.compose_unchecked(&cat.identity(b), &f), &f) {
                    report.violations.push(AxiomViolation {
                        law: "left-unit",
                        objects: vec![a, b],
                        generators: vec![u],
                    });
                }
                if !cat.equal(&cat.compose_unchecked(&f, &cat.identity(a)), &f) {
                    report.violations.push(AxiomViolation {
                        law: "right-unit",
                        objects: vec![a, b],
                        generators: vec![u],
                    });
                }
            }
            // composition must kill relations on either side
            for &c in &objs {
                let hbc = cat.hom(b, c);
                for j in 0..hab.relations().cols() {
                    let r = Morphism::new(a, b, hab.relations().column(j));
                    for u in 0..hbc.generator_count() {
                        report.checked += 1;
                        if !cat.is_zero(&cat.compose_unchecked(&gen(b, c, u), &r)) {
                            report.violations.push(AxiomViolation {
                                law: "well-defined-right",
                                objects: vec![a, b, c],
                                generators: vec![u, j],
                            });
                        }
                    }
                }
                for j in 0..hbc.relations().cols() {
                    let r = Morphism::new(b, c, hbc.relations().column(j));
                    for v in 0..hab.generator_count() {
                        report.checked += 1;
                        if !cat.is_zero(&cat.compose_unchecked(&r, &gen(a, b, v))) {
                            report.violations.push(AxiomViolation {
                                law: "well-defined-left",
                                objects: vec![a, b, c],
                                generators: vec![j, v],
                            });
                        }
                    }
                }
            }
        }
    }

    for &a in &objs {
        for &b in &objs {
            for &c in &objs {
                for &d in &objs {
                    let (nf, ng, nh) = (
                        cat.hom(a, b).generator_count(),
                        cat.hom(b, c).generator_count(),
                        cat.hom(c, d).generator_count(),
                    );
                    for w in 0..nf {
                        let f = gen(a, b, w);
                        for v in 0..ng {
                            let g = gen(b, c, v);
                            let gf = cat.compose_unchecked(&g, &f);
                            for u in 0..nh {
                                let h = gen(c, d, u);
                                report.checked += 1;
                                let left = cat.compose_unchecked(&cat.compose_unchecked(&h, &g), &f);
                                let right = cat.compose_unchecked(&h, &gf);
                                if !cat.equal(&left, &right) {
                                    report.violations.push(AxiomViolation {
                                        law: "associativity",
                                        objects: vec![a, b, c, d],
                                        generators: vec![u, v, w],
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report
}
