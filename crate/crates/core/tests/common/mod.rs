//! Random small groupoids for the integration and acceptance tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use gpdkit_core::groupoid::{closure_from_generators, MorphismData, ObjectData};
use gpdkit_core::{FiniteGroupoid, Table};

const LABELS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Table {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Table::new(v)
}

fn random_carrier<R: Rng>(rng: &mut R, n: usize) -> Vec<String> {
    let mut labels: Vec<String> = LABELS.iter().map(|s| s.to_string()).collect();
    labels.shuffle(rng);
    labels.truncate(n);
    labels
}

/// A connected groupoid with `1..=max_objects` objects whose carriers have
/// size `1..=max_carrier`: a random subgroup at the first object, spread
/// along random bridges.
pub fn random_connected<R: Rng>(rng: &mut R, max_objects: usize, max_carrier: usize) -> FiniteGroupoid {
    let k = rng.gen_range(1..=max_objects);
    let n = rng.gen_range(1..=max_carrier);
    random_connected_sized(rng, k, n)
}

pub fn random_connected_sized<R: Rng>(rng: &mut R, k: usize, n: usize) -> FiniteGroupoid {
    let objects: Vec<ObjectData> =
        (0..k).map(|j| ObjectData { id: format!("o{j}"), elements: random_carrier(rng, n) }).collect();
    let mut seeds = Vec::new();
    for g in 0..rng.gen_range(0..=2) {
        seeds.push(MorphismData { id: format!("g{g}"), src: 0, dst: 0, table: random_perm(rng, n) });
    }
    for j in 1..k {
        seeds.push(MorphismData { id: format!("b{j}"), src: 0, dst: j, table: random_perm(rng, n) });
    }
    closure_from_generators(objects, seeds).expect("generated seeds are bijections")
}

/// Objects and morphisms of a candidate structure, before any checking.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub objects: Vec<ObjectData>,
    pub morphisms: Vec<MorphismData>,
    pub mutation: &'static str,
}

impl Candidate {
    pub fn build(&self) -> FiniteGroupoid {
        FiniteGroupoid::from_indexed(self.objects.clone(), self.morphisms.clone()).expect("candidates are structurally sound")
    }
}

/// A valid groupoid (≤3 objects, carriers ≤3, possibly disconnected), then
/// with probability 3/4 a single injected fault.
pub fn random_candidate<R: Rng>(rng: &mut R) -> Candidate {
    let g = if rng.gen_bool(0.8) {
        random_connected(rng, 3, 3)
    } else {
        let a = random_connected(rng, 2, 3).with_prefix("p_").unwrap();
        let b = random_connected(rng, 1, 3).with_prefix("q_").unwrap();
        a.disjoint_union(&b).unwrap()
    };
    let objects = g.objects().to_vec();
    let mut morphisms = g.morphisms().to_vec();
    let mut mutation = "none";
    if rng.gen_bool(0.75) {
        match rng.gen_range(0..4) {
            0 if morphisms.len() > 1 => {
                let k = rng.gen_range(0..morphisms.len());
                morphisms.remove(k);
                mutation = "drop";
            }
            1 => {
                let k = rng.gen_range(0..morphisms.len());
                let m = &mut morphisms[k];
                let cod = objects[m.dst].elements.len();
                let mut images = m.table.images().to_vec();
                let x = rng.gen_range(0..images.len());
                images[x] = rng.gen_range(0..cod);
                m.table = Table::new(images);
                mutation = "perturb";
            }
            2 => {
                let mut m = morphisms[rng.gen_range(0..morphisms.len())].clone();
                m.id = "dup".into();
                morphisms.push(m);
                mutation = "duplicate";
            }
            _ => {
                let src = rng.gen_range(0..objects.len());
                let same: Vec<usize> =
                    (0..objects.len()).filter(|&j| objects[j].elements.len() == objects[src].elements.len()).collect();
                let dst = *same.choose(rng).unwrap();
                let table = random_perm(rng, objects[src].elements.len());
                morphisms.push(MorphismData { id: "extra".into(), src, dst, table });
                mutation = "extra";
            }
        }
    }
    Candidate { objects, morphisms, mutation }
}

/// Restriction of `g` to a random nonempty set of objects.
pub fn random_restriction<R: Rng>(rng: &mut R, g: &FiniteGroupoid) -> FiniteGroupoid {
    let mut keep: Vec<usize> = (0..g.object_count()).filter(|_| rng.gen_bool(0.5)).collect();
    if keep.is_empty() {
        keep.push(rng.gen_range(0..g.object_count()));
    }
    g.full_subgroupoid(&keep)
}
