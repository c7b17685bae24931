# app/cli.py
# Komut satırı: ingest, stats, mine, parallel, synth, extract, summarize, oracle, eval, doilink.
# stdout yalnızca sonuç JSON'u içindir; loglar stderr'e gider.
# Çıkış kodları: 0 başarı, 1 iç hata, 2 bozuk girdi/yapılandırma.

import argparse
import json
import logging
import sys
from typing import Any, Dict, Iterable, List, Optional

from tabulate import tabulate

from app.core import parsers
from app.core.config import LOG_LEVEL, load_pipeline_config
from app.core.errors import OzetexError
from app.schemas.metrics import TABLE_HEADERS, EvalReport
from app.services import pipeline_service

logger = logging.getLogger("ozetex")


def _print_json(payload: Any):
    sys.stdout.write(json.dumps(payload, ensure_ascii=False) + "\n")
    sys.stdout.flush()


def _write_jsonl(records: Iterable[Dict[str, Any]], out_path: Optional[str]):
    """--out verildiyse dosyaya, verilmediyse stdout'a (tek yazıcı) yazar."""
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            for record in records:
                handle.write(parsers.dump_jsonl_line(record))
    else:
        for record in records:
            sys.stdout.write(parsers.dump_jsonl_line(record))
        sys.stdout.flush()


def _print_report(report: EvalReport, fmt: str, name: str):
    if fmt == "table":
        sys.stdout.write(tabulate([report.table_row(name)], headers=TABLE_HEADERS, floatfmt=".2f") + "\n")
    else:
        _print_json(report.to_json_dict())


def _config(args: argparse.Namespace):
    overrides = {
        "workers": args.workers,
        "seed": args.seed,
        "j_hypotheses": getattr(args, "j", None),
        "abstractor_command": getattr(args, "abstractor", None),
        "generator_command": getattr(args, "generator", None),
        "word_vectors_path": getattr(args, "word_vectors", None),
        "extract": {
            "k": getattr(args, "k", None),
            "method": getattr(args, "method", None),
        },
        "align": {
            "theta_d": getattr(args, "theta_d", None),
            "theta_s": getattr(args, "theta_s", None),
        },
    }
    return load_pipeline_config(args.config, overrides)


# --- Alt komutlar ---

def run_ingest(args):
    _print_json(pipeline_service.cmd_ingest(args.input, args.out, source=args.source))


def run_stats(args):
    _print_json(pipeline_service.cmd_stats(args.corpus).model_dump())


def run_mine(args):
    stats = pipeline_service.cmd_mine(args.summaries, args.articles, _config(args), args.out, exclude_path=args.exclude)
    _print_json(stats.model_dump())


def run_parallel(args):
    _print_json(pipeline_service.cmd_parallel(args.articles, args.summaries, args.out).model_dump())


def run_synth(args):
    _print_json(pipeline_service.cmd_synth(args.pairs, args.summaries, _config(args), args.out).model_dump())


def run_extract(args):
    summaries = pipeline_service.cmd_extract(args.articles, _config(args), summaries_path=args.summaries)
    _write_jsonl((summary.to_json_dict() for summary in summaries), args.out)


def run_summarize(args):
    results = pipeline_service.cmd_summarize(args.articles, _config(args))
    _write_jsonl((result.to_json_dict() for result in results), args.out)


def run_oracle(args):
    config = _config(args)
    summaries, report = pipeline_service.cmd_oracle(args.articles, args.references, workers=config.workers)
    if args.out:
        _write_jsonl((summary.to_json_dict() for summary in summaries), args.out)
    _print_report(report, args.format, "Oracle")


def run_eval(args):
    report = pipeline_service.cmd_eval(args.system, args.references, workers=_config(args).workers)
    _print_report(report, args.format, args.name)


def run_doilink(args):
    links = pipeline_service.cmd_doilink(args.releases, args.papers)
    _write_jsonl((link.model_dump() for link in links), args.out)


# --- Argüman ayrıştırıcı ---

def _common(parser: argparse.ArgumentParser, out_required: bool = False):
    parser.add_argument("--config", help="JSON yapılandırma dosyası ya da hazır ayar adı (cnndm, science)")
    parser.add_argument("--workers", type=int, help="İşçi sayısı")
    parser.add_argument("--seed", type=int, help="Rastgelelik tohumu")
    parser.add_argument("--out", required=out_required, help="Çıktı dosyası")


def _extract_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--k", type=int, help="Çıkarılacak cümle sayısı")
    parser.add_argument("--method", choices=["lead", "lexrank"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ozetex", description="Çıkar-sonra-parafrazla özetleme araç takımı")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="Ham JSONL'i tokenize edilmiş kanonik JSONL'e çevir")
    p.add_argument("input")
    p.add_argument("--source", default="")
    _common(p, out_required=True)
    p.set_defaults(func=run_ingest)

    p = sub.add_parser("stats", help="Korpus istatistikleri")
    p.add_argument("corpus")
    _common(p)
    p.set_defaults(func=run_stats)

    p = sub.add_parser("mine", help="Sözde-paralel cümle çiftlerini çıkar")
    p.add_argument("summaries")
    p.add_argument("articles")
    p.add_argument("--theta-d", dest="theta_d", type=float)
    p.add_argument("--theta-s", dest="theta_s", type=float)
    p.add_argument("--word-vectors", dest="word_vectors")
    p.add_argument("--exclude", help="doilink çıktısı; bu id'ler hizalamaya girmez")
    _common(p, out_required=True)
    p.set_defaults(func=run_mine)

    p = sub.add_parser("parallel", help="Aynı id'li makale/özet çiftlerinden paralel çiftler")
    p.add_argument("articles")
    p.add_argument("summaries")
    _common(p, out_required=True)
    p.set_defaults(func=run_parallel)

    p = sub.add_parser("synth", help="Geri çeviriyle genişlet ve birleştir")
    p.add_argument("pairs", nargs="+", help="Çift TSV'leri (mine / parallel çıktıları)")
    p.add_argument("summaries")
    p.add_argument("--j", type=int, help="Cümle başına hipotez sayısı")
    p.add_argument("--generator", help="'builtin', 'identity' ya da harici komut")
    _common(p, out_required=True)
    p.set_defaults(func=run_synth)

    p = sub.add_parser("extract", help="Çıkarımsal özet (Lead / LexRank)")
    p.add_argument("articles")
    p.add_argument("--summaries", help="K'yı bu özet korpusundan tahmin et")
    _extract_flags(p)
    _common(p)
    p.set_defaults(func=run_extract)

    p = sub.add_parser("summarize", help="Çıkar ve parafrazla")
    p.add_argument("articles")
    p.add_argument("--abstractor", help="'identity' ya da harici komut")
    _extract_flags(p)
    _common(p)
    p.set_defaults(func=run_summarize)

    p = sub.add_parser("oracle", help="ROUGE-1 oracle üst sınırı")
    p.add_argument("articles")
    p.add_argument("references")
    p.add_argument("--format", choices=["json", "table"], default="json")
    _common(p)
    p.set_defaults(func=run_oracle)

    p = sub.add_parser("eval", help="ROUGE / METEOR raporu")
    p.add_argument("system")
    p.add_argument("references")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.add_argument("--name", default="System", help="Tablo satırı adı")
    _common(p)
    p.set_defaults(func=run_eval)

    p = sub.add_parser("doilink", help="Basın bültenlerini DOI ile makalelere bağla")
    p.add_argument("releases")
    p.add_argument("papers")
    _common(p)
    p.set_defaults(func=run_doilink)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=LOG_LEVEL,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        args.func(args)
    except OzetexError as e:
        logger.error(f"❌ {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"❌ Dosya hatası: {e}")
        return 2
    except Exception:
        logger.exception("❌ Beklenmeyen hata")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
