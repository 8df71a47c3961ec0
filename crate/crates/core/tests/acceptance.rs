//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line and asserting at the stated tolerance.

use resdet_core::suite;

fn report(criterion: &str, records: &[resdet_core::report::CheckRecord]) -> bool {
    let ok = records.iter().all(|r| r.pass);
    println!(
        "ACCEPTANCE {criterion}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    for r in records {
        println!("  {}", r.to_table_row());
    }
    ok
}

#[test]
fn criterion_01_poisson_summation_grid() {
    let records = suite::criterion_psf_grid();
    assert!(report("1 (summation identity, 5x5 grid, 1e-10)", &records));
}

#[test]
fn criterion_02_log_deriv_closed_formula_circle() {
    let records = suite::criterion_log_deriv_formula();
    assert!(report(
        "2 (resummed log-derivative formula vs direct sum, 1e-8)",
        &records
    ));
}

#[test]
fn criterion_03_exp_deformed_closed_formula_circle() {
    let records = suite::criterion_exp_deformed_formula();
    assert!(report(
        "3 (resummed deformed formula vs direct series, 1e-8)",
        &records
    ));
}

#[test]
fn criterion_04_kernel_extension() {
    let records = suite::criterion_kernel_extension();
    assert!(report(
        "4 (kernel transform: overlap 1e-8, loop integrals 1e-6)",
        &records
    ));
}

#[test]
fn criterion_05_deformed_summation_formula() {
    let records = suite::criterion_deformed_psf();
    assert!(report(
        "5 (Gaussian deformed summation 1e-10; classical limit 1e-8)",
        &records
    ));
}

#[test]
fn criterion_06_gevrey_fits_and_borel_closure() {
    let records = suite::criterion_gevrey();
    assert!(report(
        "6 (1-Gevrey fits, N <= 12; Borel-Laplace closure)",
        &records
    ));
}

#[test]
fn criterion_07_surface_identity() {
    let records = suite::criterion_selberg();
    assert!(report(
        "7 (surface dual path 1e-6; sphere counterterm 1e-8)",
        &records
    ));
}

#[test]
fn criterion_08_deformation_limit() {
    let records = suite::criterion_limit();
    let ok = report(
        "8 (limit table: strict decrease, final < 5% of initial; one-term case 1e-10)",
        &records,
    );
    // the 5% contraction cannot hold: the gap decays like |s0| log(1/|s0|),
    // which pins the measured ratio near 0.36 over this s0 sequence (and
    // >= 0.125 for any concave-increasing gap); asserted as stated anyway
    assert!(
        ok,
        "the limit-table contraction assertion is analytically unattainable at the stated \
         s0 sequence; see the record's note field for the measured table"
    );
}

#[test]
fn criterion_09_quadrature_infrastructure() {
    let records = suite::criterion_quadrature();
    assert!(report(
        "9 (gamma endpoints 1e-9; direction invariance 1e-9; derivative rule 1e-7)",
        &records
    ));
}

#[test]
fn criterion_10_determinism_and_runtime() {
    let t0 = std::time::Instant::now();
    let first = suite::run_full_suite(42, suite::default_threads());
    let second = suite::run_full_suite(42, 1);
    let elapsed = t0.elapsed();
    let bytes_a: Vec<String> = first.iter().map(|r| r.to_json_line()).collect();
    let bytes_b: Vec<String> = second.iter().map(|r| r.to_json_line()).collect();
    let identical = bytes_a == bytes_b;
    let fast = elapsed.as_secs() < 300;
    println!(
        "ACCEPTANCE 10 (determinism + runtime): {} (two runs identical: {identical}, \
         2x suite in {elapsed:?})",
        if identical && fast { "PASS" } else { "FAIL" }
    );
    assert!(identical, "seeded suite runs differ");
    assert!(fast, "suite exceeded the runtime budget: {elapsed:?}");
}
