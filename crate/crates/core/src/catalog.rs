//! Built-in workspace definitions. Stabilizer and pair data are spelled out so
//! callers never have to enter matrices for the standard examples.

use crate::dsl::Workspace;

pub const PRELUDE: &str = r#"
# atoms and direct products
group z1 = Z(1)
group z2 = Z(2)
group f2 = free(2)
group f2xf2 = product(free(2), free(2))
group f2xz = product(free(2), Z(1))
group z2xf2 = product(Z(2), free(2))

# regular wreath products
group lamp2 = lamplighter(2) gens [a, s]
group zwrz = zwrz gens [h, z]
group z2wrz = regular(Z(2), Z(1))
group f2wrz = regular(free(2), Z(1))
group f2wrc3 = regular(free(2), cyclic(3))

# Z wr Z^2 over the line Z^2/<(0,1)>; every point and pair has stabilizer <(0,1)>
group zwr_z2_line = wreath(base=Z(1), top=Z(2),
    orbits=[{label="x0", size=inf, stab=Z(1), stabmap=[[0], [1]]}],
    pairs=[{label="offdiag", stabmap=[[0], [1]]}])

# chi|_M = 0 with conditions (1) and (3) holding and (2) failing
group tri_c2 = wreath(base=cyclic(2), top=product(free(2), Z(1)),
    orbits=[{label="x0", size=inf, stab=free(2), stabmap=[[1, 0], [0, 1], [0, 0]]}],
    pairs=[{label="offdiag", stabmap=[[1, 0], [0, 1], [0, 0]]}])
group tri_z = wreath(base=Z(1), top=product(free(2), Z(1)),
    orbits=[{label="x0", size=inf, stab=free(2), stabmap=[[1, 0], [0, 1], [0, 0]]}],
    pairs=[{label="offdiag", stabmap=[[1, 0], [0, 1], [0, 0]]}])

char theta on lamp2 = [1]
char eta1 on zwrz = [1, 0]
char theta1 on zwrz = [0, 1]
char tri_chi on tri_c2 = [1, 0, 1]
char tri_chi_z on tri_z = [0, 1, 0, 1]
"#;

pub fn catalog() -> Workspace {
    Workspace::parse(PRELUDE).expect("built-in catalog parses")
}

/// Catalog groups (by name) that the lab can realize.
pub fn realizable_names() -> Vec<&'static str> {
    vec![
        "z1",
        "z2",
        "f2",
        "f2xf2",
        "f2xz",
        "z2xf2",
        "lamp2",
        "zwrz",
        "z2wrz",
        "f2wrz",
        "f2wrc3",
        "zwr_z2_line",
    ]
}
