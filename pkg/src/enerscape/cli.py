"""Operator command line.

Exit codes: 0 success, 1 validation or runtime failure, 2 usage error.
Failures print a single machine-parseable line: ``error: <Code>: <detail>``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import climate, content, jobs, quest, surrogate
from .errors import EngineError


def _add_content_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--content",
        type=Path,
        default=None,
        help="content pack JSON (defaults to the packaged pack)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="enerscape",
        description="Escape-room engine and building-physics simulation service",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service until interrupted")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    _add_content_flag(serve)
    serve.add_argument("--scenario", type=Path, action="append", default=None,
                       help="scenario file; repeat for several")
    serve.add_argument("--model", type=Path, default=None, help="surrogate artifact")
    serve.add_argument("--oracle", action="store_true",
                       help="serve oracle energy results even when a model is loaded")
    serve.add_argument("--data-dir", type=Path, default=Path("./data"))

    gadgets = sub.add_parser("gadgets", help="evaluate a wall file and print the report")
    gadgets.add_argument("--wall", type=Path, required=True)
    _add_content_flag(gadgets)
    gadgets.add_argument("--params", type=Path, default=None,
                         help="optional simulation params to fill the energy gadget")

    simulate = sub.add_parser("simulate", help="one energy calculation")
    simulate.add_argument("--params", type=Path, required=True)
    _add_content_flag(simulate)
    simulate.add_argument("--model", type=Path, default=None,
                          help="use this surrogate instead of the oracle")

    sample = sub.add_parser("sample", help="build an oracle training dataset")
    sample.add_argument("--n", type=int, required=True)
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument("--out", type=Path, required=True)
    _add_content_flag(sample)

    train = sub.add_parser("train", help="fit the surrogate on a dataset")
    train.add_argument("--data", type=Path, required=True)
    train.add_argument("--lambda", dest="ridge_lambda", type=float, default=1e-3)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--out", type=Path, required=True)
    _add_content_flag(train)

    evaluate = sub.add_parser("eval", help="score a model against a dataset")
    evaluate.add_argument("--model", type=Path, required=True)
    evaluate.add_argument("--data", type=Path, required=True)

    play = sub.add_parser("play", help="run a scripted playthrough headlessly")
    play.add_argument("--scenario", type=Path, required=True)
    play.add_argument("--script", type=Path, required=True)
    _add_content_flag(play)
    play.add_argument("--model", type=Path, default=None)
    play.add_argument("--seed", type=int, default=0)
    play.add_argument("--quiet", action="store_true", help="suppress the event feed")

    validate = sub.add_parser("validate-content", help="check packs and scenarios")
    _add_content_flag(validate)
    validate.add_argument("--scenario", type=Path, action="append", default=None)

    return parser


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    pack = content.load_content_pack(args.content)
    scenario_paths = args.scenario or [
        content.default_content_path().parent / "scenario_escape_room.json",
        content.default_content_path().parent / "scenario_tutorial.json",
    ]
    scenarios = {}
    for path in scenario_paths:
        scenario = quest.load_scenario(path)
        scenarios[scenario.id] = scenario
    model = surrogate.load_model(args.model) if args.model else None
    config = ServiceConfig(
        content=pack,
        scenarios=scenarios,
        data_dir=args.data_dir,
        model=model,
        use_oracle=args.oracle or model is None,
    )
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stdout)
    app = create_app(config)
    print(
        json.dumps(
            {
                "serving": list(scenarios),
                "port": args.port,
                "mode": "oracle" if config.active_model is None else "surrogate",
                "data_dir": str(args.data_dir),
            }
        )
    )
    uvicorn.run(app, host=args.host, port=args.port, access_log=False)
    return 0


def cmd_gadgets(args) -> int:
    pack = content.load_content_pack(args.content)
    wall = pack.wall_from_dict(json.loads(args.wall.read_text(encoding="utf-8")))
    report = pack.gadget_report(wall)
    if args.params is not None:
        params = climate.SimulationParams.from_dict(
            json.loads(args.params.read_text(encoding="utf-8"))
        )
        climate.validate_params(params, pack.climate)
        report.energy = climate.annual_energy(params, pack.room, pack.climate, pack.rating_bands)
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def cmd_simulate(args) -> int:
    pack = content.load_content_pack(args.content)
    params = climate.SimulationParams.from_dict(
        json.loads(args.params.read_text(encoding="utf-8"))
    )
    climate.validate_params(params, pack.climate)
    if args.model is not None:
        model = surrogate.load_model(args.model)
        result = surrogate.predict(model, params).energy
    else:
        result = climate.annual_energy(params, pack.room, pack.climate, pack.rating_bands)
    print(json.dumps(result.to_dict(), indent=2))
    return 0


def cmd_sample(args) -> int:
    pack = content.load_content_pack(args.content)
    started = time.perf_counter()
    rows = climate.sample_dataset(args.n, args.seed, pack.climate, pack.room, pack.rating_bands)
    climate.write_dataset(args.out, rows)
    print(
        json.dumps(
            {
                "rows": len(rows),
                "seed": args.seed,
                "out": str(args.out),
                "seconds": round(time.perf_counter() - started, 3),
            }
        )
    )
    return 0


def cmd_train(args) -> int:
    pack = content.load_content_pack(args.content)
    rows = climate.read_dataset(args.data)
    started = time.perf_counter()
    model = surrogate.fit(
        rows,
        ridge_lambda=args.ridge_lambda,
        seed=args.seed,
        rating_bands=pack.rating_bands,
        content_pack_hash=pack.sha256,
    )
    surrogate.save_model(model, args.out)
    print(
        json.dumps(
            {
                "out": str(args.out),
                "rows": len(rows),
                "ridge_lambda": args.ridge_lambda,
                "seed": args.seed,
                "seconds": round(time.perf_counter() - started, 3),
                "metrics": model.train_metrics,
            }
        )
    )
    return 0


def cmd_eval(args) -> int:
    model = surrogate.load_model(args.model)
    rows = climate.read_dataset(args.data)
    metrics = surrogate.evaluate(model, rows)
    print(json.dumps(metrics, indent=2))
    return 0


def cmd_play(args) -> int:
    pack = content.load_content_pack(args.content)
    scenario = quest.load_scenario(args.scenario)
    engine = quest.GameEngine(scenario, pack)
    actions = jobs.load_script(args.script)
    model = surrogate.load_model(args.model) if args.model else None
    on_event = None if args.quiet else lambda e: print(json.dumps(e.to_dict()))
    result = jobs.run_script(engine, actions, seed=args.seed, model=model, on_event=on_event)
    print(
        json.dumps(
            {
                "door_opened": result.door_opened,
                "locks_unlocked": result.state.locks_unlocked,
                "events": len(result.state.event_log),
            }
        )
    )
    return 0 if result.door_opened else 1


def cmd_validate_content(args) -> int:
    ok = True
    pack = None
    pack_path = args.content or content.default_content_path()
    try:
        pack = content.load_content_pack(args.content)
        print(f"ok: content pack {pack_path} (version {pack.version})")
    except EngineError as exc:
        ok = False
        print(f"invalid: {exc}")
    for path in args.scenario or []:
        try:
            scenario = quest.load_scenario(path)
            problems = (
                quest.validate_scenario_against_content(scenario, pack) if pack else []
            )
            if problems:
                ok = False
                print(f"invalid: scenario {path}: " + "; ".join(problems))
            else:
                print(
                    f"ok: scenario {path} (id {scenario.id}, "
                    f"{scenario.major_count} major quests)"
                )
        except EngineError as exc:
            ok = False
            print(f"invalid: {exc}")
    return 0 if ok else 1


COMMANDS = {
    "serve": cmd_serve,
    "gadgets": cmd_gadgets,
    "simulate": cmd_simulate,
    "sample": cmd_sample,
    "train": cmd_train,
    "eval": cmd_eval,
    "play": cmd_play,
    "validate-content": cmd_validate_content,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except EngineError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: FileNotFound: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: MalformedJson: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
