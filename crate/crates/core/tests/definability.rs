use bohm::models::{define_functional, i_defines_check, kappa, PModel};
use bohm::syntax::parse_type;

#[test]
fn exhaustive_base_two() {
    let m = PModel::new(2).unwrap();
    for t in ["p", "p->p", "(p->p)->p"] {
        let ty = parse_type(t).unwrap();
        for phi in m.enumerate(ty).unwrap() {
            let k = kappa(&phi).unwrap() as usize;
            for i in [k, k + 1] {
                let a = define_functional(&phi, i).unwrap();
                assert!(i_defines_check(&a, &phi, i, 3).unwrap(), "{phi} at {i}");
            }
        }
    }
}
