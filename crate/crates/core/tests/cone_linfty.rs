use gendef::samples::cone_instances;

#[test]
fn generalized_jacobi_through_arity_four() {
    for (name, cone) in cone_instances() {
        let r = cone.brackets().check_linfty(4);
        assert!(r.passed(), "{name}: {r}");
    }
}

#[test]
fn flipped_third_bracket_violates_jacobi() {
    let mut failures = 0;
    for (_, cone) in cone_instances() {
        if !cone.with_flipped_sign(3).brackets().check_linfty(4).passed() {
            failures += 1;
        }
    }
    assert!(failures > 0);
}
