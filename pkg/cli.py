#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
CLI para orquestrar o pipeline de imersões de cliques

Verbos:
 - gen: gera um grafo determinístico (lista de arestas)
 - embed: extrai o expansor, embute e grava o certificado
 - verify: verifica um certificado contra o grafo (processo independente)
 - oracle: ordem máxima exata por busca exaustiva (grafos pequenos)
 - kst-check: procura K_{s,t} e reporta razões de densidade
 - expander-extract: extrai um subgrafo candidato a expansor robusto
 - expander-certify: certifica (ou refuta com testemunha) a expansão robusta
 - bench: tabela TSV de benchmark sobre um corpus fixo

Uso:
  python cli.py                      # menu interativo
  python cli.py gen --kind Cycle --param n=5 --output c5.txt
  python cli.py embed --input c5.txt --output c5.cert
  python cli.py verify --input c5.txt --certificate c5.cert
  python cli.py bench --profile tiny --output bench.tsv

Códigos de saída: 0 sucesso, 1 verificação falhou, 2 entrada inválida,
3 orçamento excedido.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from pipelines.clique_immersion import config_immersion as cfg
from pipelines.clique_immersion.src.config import EmbedConfig, configurar_pandas
from pipelines.clique_immersion.src.errors import BudgetExceeded, CertificateFormatError
from pipelines.clique_immersion.src.modules.expansion import (
    Exhaustive,
    Sampled,
    Witness,
    certify_robust_expansion,
    extract_robust_expander,
    replay_witness,
)
from pipelines.clique_immersion.src.modules.extremal import find_kst, kst_density_report
from pipelines.clique_immersion.src.modules.generators import GenKind, GenSpec, generate
from pipelines.clique_immersion.src.modules.graph_core import format_edge_list, read_edge_list
from pipelines.clique_immersion.src.modules.immersion import format_certificate, oracle_max_immersion
from pipelines.clique_immersion.src.workbench import run_benchmark, write_benchmark
from src.embedder import embed_file, load_certificate, verify_files
from src.utils import timestamp, write_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_BUDGET = 3


def _emit(text: str, output: str | None) -> None:
    if output:
        write_text(output, text)
        print(f"[OK] Arquivo salvo em {output}")
    else:
        sys.stdout.write(text)


def _parse_param(raw: str) -> tuple[str, int | float]:
    key, sep, value = raw.partition("=")
    if not sep or not key:
        raise ValueError(f"parâmetro inválido '{raw}' (use chave=valor)")
    try:
        return key, int(value)
    except ValueError:
        return key, float(value)


def build_config(args) -> EmbedConfig:
    common = dict(
        s=args.s,
        t=args.t,
        seed=args.seed,
        time_budget_secs=args.time_budget_secs,
        try_all_routes=not args.single_route,
    )
    if args.epsilon is not None:
        return EmbedConfig.from_epsilon(args.epsilon, **common)
    return EmbedConfig.create(mode=args.mode, eps1=args.eps1, eps2=args.eps2, eta=args.eta, **common)


# ==============================================================================
#      VERBOS
# ==============================================================================

def do_gen(args) -> int:
    params = dict(_parse_param(p) for p in args.param)
    spec = GenSpec(GenKind(args.kind), params, seed=args.seed)
    G = generate(spec)
    _emit(format_edge_list(G, spec.header()), args.output)
    return EXIT_OK


def do_embed(args) -> int:
    config = build_config(args)
    print("=" * 80)
    print("ETAPA 1/2: EXTRAÇÃO E EMBUTIMENTO")
    print("=" * 80)
    G, imm, report = embed_file(args.input, config, args.output)
    print("=" * 80)
    print("ETAPA 2/2: RELATÓRIO")
    print("=" * 80)
    text = "\n".join(report.to_lines(timing=args.timing)) + "\n"
    if args.report:
        write_text(args.report, text)
        print(f"[OK] Relatório salvo em {args.report}")
    else:
        sys.stdout.write(text)
    if args.output is None:
        sys.stdout.write(format_certificate(imm))
    print(f"[OK] Imersão de ordem {imm.order} (rota {report.route}, alvo {report.target})")
    return EXIT_OK


def do_verify(args) -> int:
    result = verify_files(args.input, args.certificate, strong=args.strong)
    host = load_certificate(args.certificate).host_id
    fingerprint = read_edge_list(args.input).fingerprint()
    if host and host != fingerprint:
        print(f"[AVISO] Certificado gerado para o hospedeiro {host}, grafo atual é {fingerprint}")
    if result.ok:
        print("[OK] Certificado válido")
        return EXIT_OK
    for violation in result.violations:
        print(f"[ERRO] {violation.to_line()}")
    return EXIT_VERIFY_FAILED


def do_oracle(args) -> int:
    G = read_edge_list(args.input)
    if G.n > cfg.ORACULO_MAX_N + 1:
        print(f"[AVISO] n={G.n}: o oráculo é exato só para grafos pequenos e pode demorar")
    result = oracle_max_immersion(G, args.cap, args.budget)
    print(f"max_order={result.max_order}")
    print(f"exact={result.exact}")
    print(f"nodes={result.nodes}")
    if args.output:
        write_text(args.output, format_certificate(result.certificate))
        print(f"[OK] Certificado salvo em {args.output}")
    if not result.exact:
        print("[AVISO] Orçamento excedido: valor é apenas cota inferior")
        return EXIT_BUDGET
    return EXIT_OK


def do_kst_check(args) -> int:
    G = read_edge_list(args.input)
    witness = find_kst(G, args.s, args.t, workers=args.workers)
    print(witness.to_line() if witness else f"KST-FREE {args.s} {args.t}")
    for line in kst_density_report(G, args.s, args.t).to_lines():
        print(line)
    return EXIT_OK


def do_expander_extract(args) -> int:
    config = build_config(args)
    G = read_edge_list(args.input)
    result = extract_robust_expander(
        G,
        config.eps1,
        config.eps2,
        args.rounds,
        trials=args.trials,
        seed=config.seed,
        workers=args.workers,
    )
    for line in result.history:
        print(f"[INFO] {line}")
    header = [
        f"extraído de {G.fingerprint()}",
        f"status={result.verdict.status.value} complete={result.complete} degenerate={result.degenerate}",
        f"density_ok={result.density_ok} min_degree_ok={result.min_degree_ok}",
        "ids " + " ".join(map(str, result.ids.to_host)),
    ]
    _emit(format_edge_list(result.graph, header), args.output)
    return EXIT_OK


def do_expander_certify(args) -> int:
    config = build_config(args)
    G = read_edge_list(args.input)
    if args.replay:
        witness = Witness.from_text(Path(args.replay).read_text(encoding="utf-8"))
        ok = replay_witness(G, witness, config.eps1, config.eps2)
        print("[OK] Testemunha reproduzida" if ok else "[ERRO] Testemunha não viola a expansão")
        return EXIT_OK if ok else EXIT_VERIFY_FAILED
    if args.sampled:
        mode = Sampled(seed=config.seed, trials=args.trials, workers=args.workers)
    else:
        mode = Exhaustive()
    verdict = certify_robust_expansion(G, config.eps1, config.eps2, mode)
    print(f"status={verdict.status.value}")
    print(f"samples_tried={verdict.samples_tried}")
    if verdict.note:
        print(f"note={verdict.note}")
    if verdict.witness is not None:
        text = verdict.witness.to_text()
        if args.witness:
            write_text(args.witness, text)
            print(f"[OK] Testemunha salva em {args.witness}")
        else:
            sys.stdout.write(text)
    return EXIT_OK


def do_bench(args) -> int:
    config = build_config(args)
    configurar_pandas()
    start = time.time()
    df = run_benchmark(args.profile, config, workers=args.workers, timing=args.timing)
    output = args.output or str(cfg.BENCHMARK_DIR / f"bench_{args.profile}.tsv")
    write_benchmark(df, output)
    print(df.to_string(index=False))
    print(f"[OK] {len(df)} linhas em {time.time() - start:.1f}s -> {output}")
    return EXIT_OK


# ==============================================================================
#      ARGUMENTOS
# ==============================================================================

def parse_args(argv=None):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--input', help='Lista de arestas de entrada')
    common.add_argument('--output', help='Arquivo de saída (padrão: stdout)')
    common.add_argument('--seed', type=int, default=cfg.SEMENTE_PADRAO)
    common.add_argument('--mode', choices=cfg.MODOS_VALIDOS, default=cfg.MODO_PADRAO)
    common.add_argument('--eps1', type=float, default=cfg.EPS1_PADRAO)
    common.add_argument('--eps2', type=float, default=cfg.EPS2_PADRAO)
    common.add_argument('--eta', type=float, default=cfg.ETA_PADRAO)
    common.add_argument('--epsilon', type=float, help='Deriva eta, eps1 e eps2 de um único epsilon (modo teórico)')
    common.add_argument('--s', type=int, default=cfg.S_PADRAO)
    common.add_argument('--t', type=int, default=cfg.T_PADRAO)
    common.add_argument('--time-budget-secs', type=float, default=cfg.TEMPO_LIMITE_SEGUNDOS)
    common.add_argument('--workers', type=int, default=1)
    common.add_argument('--single-route', action='store_true', help='Executa só a rota do caso disparado')
    common.add_argument('--verbose', action='store_true', help='Log em nível DEBUG')

    parser = argparse.ArgumentParser(description="CLI do pipeline de imersões de cliques")
    sub = parser.add_subparsers(dest='command')

    p = sub.add_parser('gen', parents=[common], help='Gera um grafo')
    p.add_argument('--kind', required=True, choices=[k.value for k in GenKind])
    p.add_argument('--param', action='append', default=[], help='Parâmetro chave=valor (repetível)')
    p.set_defaults(func=do_gen)

    p = sub.add_parser('embed', parents=[common], help='Embute uma imersão de clique')
    p.add_argument('--report', help='Arquivo para o relatório chave=valor')
    p.add_argument('--timing', action='store_true', help='Inclui tempo de execução no relatório')
    p.set_defaults(func=do_embed, needs_input=True)

    p = sub.add_parser('verify', parents=[common], help='Verifica um certificado')
    p.add_argument('--certificate', required=True)
    p.add_argument('--strong', action='store_true', help='Exige imersão forte')
    p.set_defaults(func=do_verify, needs_input=True)

    p = sub.add_parser('oracle', parents=[common], help='Ordem máxima exata')
    p.add_argument('--cap', type=int, default=None)
    p.add_argument('--budget', type=int, default=cfg.ORACULO_ORCAMENTO)
    p.set_defaults(func=do_oracle, needs_input=True)

    p = sub.add_parser('kst-check', parents=[common], help='Procura K_{s,t}')
    p.set_defaults(func=do_kst_check, needs_input=True)

    p = sub.add_parser('expander-extract', parents=[common], help='Extrai um expansor robusto')
    p.add_argument('--rounds', type=int, default=cfg.RODADAS_EXTRACAO)
    p.add_argument('--trials', type=int, default=cfg.AMOSTRAS_CERTIFICACAO)
    p.set_defaults(func=do_expander_extract, needs_input=True)

    p = sub.add_parser('expander-certify', parents=[common], help='Certifica a expansão robusta')
    p.add_argument('--sampled', action='store_true', help='Modo amostrado (obrigatório para n > 20)')
    p.add_argument('--trials', type=int, default=cfg.AMOSTRAS_CERTIFICACAO)
    p.add_argument('--witness', help='Grava a testemunha (X, F) neste arquivo')
    p.add_argument('--replay', help='Reproduz uma testemunha gravada')
    p.set_defaults(func=do_expander_certify, needs_input=True)

    p = sub.add_parser('bench', parents=[common], help='Benchmark sobre um corpus')
    p.add_argument('--profile', default='tiny')
    p.add_argument('--timing', action='store_true', help='Adiciona a coluna runtime')
    p.set_defaults(func=do_bench)

    return parser.parse_args(argv)


def dispatch(args) -> int:
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
    )
    try:
        if getattr(args, 'needs_input', False) and not args.input:
            raise ValueError(f"{args.command} exige --input")
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"[ERRO] Orçamento excedido: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CertificateFormatError as exc:
        print(f"[ERRO] Certificado malformado: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except (ValueError, OSError) as exc:
        print(f"[ERRO] Entrada inválida: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT


# ==============================================================================
#      MENU INTERATIVO
# ==============================================================================

def interactive_menu() -> int:
    print("\n== Imersões de Cliques - Menu Interativo ==")
    print("Escolha uma opção:")
    print("  1) gerar grafo")
    print("  2) embutir imersão")
    print("  3) verificar certificado")
    print("  4) benchmark (perfil tiny)")
    print("  5) sair")

    while True:
        try:
            choice = int(input("Digite o número da opção e pressione Enter: ").strip())
        except ValueError:
            print("Opção inválida, tente novamente.")
            continue

        if choice == 1:
            kind = input(f"Tipo ({', '.join(k.value for k in GenKind)}): ").strip()
            params = input("Parâmetros (ex.: n=10 p=0.5): ").split()
            output = input("Arquivo de saída: ").strip() or f"grafo_{timestamp()}.txt"
            argv = ['gen', '--kind', kind, '--output', output]
            for raw in params:
                argv += ['--param', raw]
            return dispatch(parse_args(argv))
        elif choice == 2:
            graph = input("Lista de arestas: ").strip()
            default = cfg.CERTIFICADOS_DIR / f"{Path(graph).stem}.cert"
            output = input(f"Certificado de saída [{default}]: ").strip() or str(default)
            return dispatch(parse_args(['embed', '--input', graph, '--output', output]))
        elif choice == 3:
            graph = input("Lista de arestas: ").strip()
            cert = input("Certificado: ").strip()
            return dispatch(parse_args(['verify', '--input', graph, '--certificate', cert]))
        elif choice == 4:
            return dispatch(parse_args(['bench', '--profile', 'tiny']))
        elif choice == 5:
            print("Saindo.")
            return EXIT_OK
        else:
            print("Opção inválida. Informe um número entre 1 e 5.")


def main(argv=None) -> int:
    if argv is None and len(sys.argv) == 1:
        return interactive_menu()
    args = parse_args(argv)
    if args.command is None:
        return interactive_menu()
    return dispatch(args)


if __name__ == '__main__':
    sys.exit(main())
