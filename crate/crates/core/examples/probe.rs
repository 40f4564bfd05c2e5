use std::time::Instant;

use rainbow_core::solve::enumerate::for_each_canonical_instance;
use rainbow_core::solve::falsify::falsify;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(String::as_str).unwrap_or("enum2");
    match which {
        "enum2" => {
            let t = Instant::now();
            let count = for_each_canonical_instance(2, 2, 6, &mut |_| {}).unwrap();
            println!("n=2 kernels 2..=6: {count} instances in {:?}", t.elapsed());
        }
        "enum3" => {
            let t = Instant::now();
            let count = for_each_canonical_instance(3, 2, 6, &mut |_| {}).unwrap();
            println!("n=3 kernels 2..=6: {count} instances in {:?}", t.elapsed());
        }
        "falsify38" => {
            let t = Instant::now();
            let result = falsify(3, 8, false, 10_000_000, 0).unwrap();
            match result {
                Some(r) => println!(
                    "witness found: restart {}, candidates {}, in {:?}\n{}",
                    r.restart,
                    r.candidates_evaluated,
                    t.elapsed(),
                    rainbow_core::json::serialize_instance(&r.instance)
                ),
                None => println!("no witness within budget, {:?}", t.elapsed()),
            }
        }
        other => eprintln!("unknown probe {other}"),
    }
}
