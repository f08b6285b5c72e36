macro_rules! example {
    ($module:ident, $test:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(paradox, paradox_example_runs, "paradox.rs");
example!(
    compliance_table,
    compliance_table_example_runs,
    "compliance_table.rs"
);
example!(equivalences, equivalences_example_runs, "equivalences.rs");
example!(
    override_rewriting,
    override_rewriting_example_runs,
    "override_rewriting.rs"
);
example!(eval_trace, eval_trace_example_runs, "eval_trace.rs");
example!(model_check, model_check_example_runs, "model_check.rs");
example!(classify, classify_example_runs, "classify.rs");
example!(parse_render, parse_render_example_runs, "parse_render.rs");
