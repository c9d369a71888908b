use spherelp::parallel::certify_parallel;
use spherelp_core::auxfn::{certify_nonpositive_with, CertifyOptions};
use spherelp_core::constructions::{cubic_g3, hex_g2, one_dim_coeffs};

#[test]
fn report_does_not_depend_on_jobs() {
    let cases = [
        (hex_g2(), CertifyOptions::new(1e-3, 5e-3)),
        (cubic_g3(), CertifyOptions::new(5e-3, 2e-2)),
        (one_dim_coeffs(5).unwrap().series(), CertifyOptions::new(1e-3, 1e-3)),
    ];
    for (s, opts) in cases {
        let serial = certify_nonpositive_with(&s, opts).unwrap();
        for jobs in [1, 2, 3, 7, 64] {
            assert_eq!(certify_parallel(&s, opts, jobs).unwrap(), serial, "jobs={jobs}");
        }
    }
}
