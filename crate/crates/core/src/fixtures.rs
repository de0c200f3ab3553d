//! Small reference instances used by tests, docs and the shipped config files.

use crate::model::{AspirationGroup, Instance, NetworkSpec, Population, ProductSpec};
use crate::rational::{int, ratio};

fn two_group(v_h: i64) -> Instance {
    let population = Population::new(vec![
        AspirationGroup::new(2, int(95)),
        AspirationGroup::new(8, int(50)),
    ]);
    let product = ProductSpec::constant(int(90), int(v_h), ratio(1, 2), 10);
    Instance::validate(population, product, NetworkSpec::Uniform { s: ratio(1, 2) })
        .expect("fixture is valid")
}

/// Groups (2, H=95) and (8, H=50); v_L = 90, v_H = 100, s_p = 1/2, uniform s = 1/2.
pub fn instance_a() -> Instance {
    two_group(100)
}

/// Instance A with v_H = 200.
pub fn instance_b() -> Instance {
    two_group(200)
}

/// One group of 10 with H = v_L = 90; v_H = 100, s_p = 1/2, uniform s = 1/2.
pub fn instance_c() -> Instance {
    let population = Population::new(vec![AspirationGroup::new(10, int(90))]);
    let product = ProductSpec::constant(int(90), int(100), ratio(1, 2), 10);
    Instance::validate(population, product, NetworkSpec::Uniform { s: ratio(1, 2) })
        .expect("fixture is valid")
}
