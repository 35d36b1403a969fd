//! Seeded generator of large traditional trees, for benchmarks and scale tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::family::{FamilyTree, Sex, TraditionalTree};

struct Couple {
    husband: String,
    wife: String,
    youngest_parent_year: i32,
}

/// Builds a multi-generation tree of roughly `target` persons. Every child of
/// the tree marries an outsider with no recorded parents, so the result is
/// traditional by construction.
pub fn generate(target: usize, seed: u64) -> TraditionalTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = FamilyTree::builder();
    let mut count = 0usize;
    let date = |rng: &mut ChaCha8Rng, year: i32| {
        format!(
            "{:02}.{:02}.{:04}",
            rng.random_range(1..=28),
            rng.random_range(1..=12),
            year
        )
    };
    let mut next_id = |prefix: &str| {
        count += 1;
        format!("{prefix}{count}")
    };

    let mut couples = Vec::new();
    let founders = (target / 50).max(1);
    for _ in 0..founders {
        let (h, w) = (next_id("h"), next_id("w"));
        let year = 1700;
        b = b.person(&h, Sex::Male, &date(&mut rng, year)).person(
            &w,
            Sex::Female,
            &date(&mut rng, year + 1),
        );
        b = b.marry(&h, &w, &date(&mut rng, year + 25));
        couples.push(Couple {
            husband: h,
            wife: w,
            youngest_parent_year: year + 1,
        });
    }

    let mut persons = founders * 2;
    while persons < target && !couples.is_empty() {
        let mut next = Vec::new();
        for c in &couples {
            let kids = rng.random_range(1..=4);
            for k in 0..kids {
                if persons >= target {
                    break;
                }
                let year = c.youngest_parent_year + 20 + 2 * k + rng.random_range(0..5);
                let sex = if rng.random_bool(0.5) {
                    Sex::Male
                } else {
                    Sex::Female
                };
                let kid = next_id("p");
                b = b
                    .person(&kid, sex, &date(&mut rng, year))
                    .parent(&c.husband, &kid)
                    .parent(&c.wife, &kid);
                persons += 1;
                if persons >= target || rng.random_bool(0.15) {
                    continue;
                }
                let spouse = next_id("o");
                let spouse_sex = if sex == Sex::Male {
                    Sex::Female
                } else {
                    Sex::Male
                };
                let spouse_year = year + rng.random_range(-3..=3);
                b = b.person(&spouse, spouse_sex, &date(&mut rng, spouse_year));
                b = b.marry(&kid, &spouse, &date(&mut rng, year.max(spouse_year) + 22));
                persons += 1;
                let (husband, wife) = if sex == Sex::Male {
                    (kid, spouse)
                } else {
                    (spouse, kid)
                };
                next.push(Couple {
                    husband,
                    wife,
                    youngest_parent_year: year.max(spouse_year),
                });
            }
        }
        couples = next;
    }
    let tree = b.build().expect("generated tree is well-formed");
    TraditionalTree::new(tree).expect("generated tree is traditional")
}
