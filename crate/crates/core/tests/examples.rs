macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run().unwrap();
        }
    };
}

example!(winnow_cars);
example!(dominance_table);
example!(pgraph_validate);
example!(minimal_extensions);
example!(constraints);
example!(elicit_cars);
example!(brute_force);
example!(synthetic_experiment);
