# -*- coding: utf-8 -*-
"""
CONFIGURAÇÃO DO PIPELINE DE IMERSÕES
====================================

Arquivo central de configuração para extração de expansores, embutimento de
imersões de cliques e benchmarks.

IMPORTANTE: Edite este arquivo para alterar parâmetros padrão. Flags da CLI
sobrescrevem estes valores em tempo de execução.
"""

import math
from pathlib import Path

# Diretório base do módulo (usado em caminhos relativos)
BASE_DIR = Path(__file__).resolve().parent

# ==============================================================================
# PARÂMETROS DE EXPANSÃO
# ==============================================================================

# eps1 do modo teórico precisa respeitar eps1 <= 1/400
EPS1_PADRAO = 1 / 400
EPS2_PADRAO = 0.01

# eta >= max{40*eps1/log 3, 5*eps2} no modo teórico (0.091 para os padrões acima)
ETA_PADRAO = 0.1

# Constante C da extração: eta = C * eps1 / log 3
CONSTANTE_EXTRACAO = 40

# Tetos do modo teórico
EPS1_MAX_TEORICO = 1 / 400
EPS2_MAX_TEORICO = 0.5
LOG3 = math.log(3)

# ==============================================================================
# MODO DE EXECUÇÃO
# ==============================================================================

# "practical" = parâmetros escalados para grafos de bancada | "paper" = fórmulas assintóticas
MODO_PADRAO = "practical"
MODOS_VALIDOS = ("paper", "practical")

# K_{s,t} proibido
S_PADRAO = 2
T_PADRAO = 2

SEMENTE_PADRAO = 0

# Orçamento de tempo por embutimento (segundos)
TEMPO_LIMITE_SEGUNDOS = 120.0

# Tenta todas as rotas viáveis e fica com a de maior ordem
TENTAR_TODAS_ROTAS = True

# ==============================================================================
# CERTIFICAÇÃO E EXTRAÇÃO
# ==============================================================================

# Enumeração exaustiva de subconjuntos só até este n
LIMITE_EXAUSTIVO_MAXIMO = 20

# Limite usado dentro do pipeline (mais barato que o máximo permitido)
LIMITE_EXAUSTIVO = 12

# Conjuntos aleatórios testados no modo amostrado
AMOSTRAS_CERTIFICACAO = 64

# Rodadas de poda + corte na extração
RODADAS_EXTRACAO = 8

# ==============================================================================
# ORÁCULO E GERADORES
# ==============================================================================

# Oráculo exaustivo roda no benchmark só para n <= ORACULO_MAX_N
ORACULO_MAX_N = 7

# Limite de nós da busca com retrocesso
ORACULO_ORCAMENTO = 2_000_000

# Tentativas do modelo de configuração antes de desistir
MAX_REAMOSTRAGENS_REGULAR = 10_000

# ==============================================================================
# PARALELISMO E SAÍDAS
# ==============================================================================

# Número máximo de linhas de benchmark processadas em paralelo
MAX_BENCH_WORKERS = 4

# Número de workers da certificação amostrada (1 = sequencial)
MAX_CERTIFY_WORKERS = 1

OUTPUT_DIR = BASE_DIR.parent.parent / "output" / "immersion"
CERTIFICADOS_DIR = OUTPUT_DIR / "certificados"
BENCHMARK_DIR = OUTPUT_DIR / "benchmarks"

# ==============================================================================
# NOTAS
# ==============================================================================
"""
NOTAS SOBRE OS PARÂMETROS:

1. No modo "paper" as quantidades m^5, m^10, d*m^15 e d*m^3 explodem em grafos
   de bancada; o pipeline reporta déficits em vez de abortar.

2. No modo "practical" o portão de densidade é d >= sqrt(n), o limiar de Z1 é
   4*d e kappa, r e o raio do núcleo são inteiros pequenos derivados de ceil(log n).

3. LIMITE_EXAUSTIVO controla quando a certificação troca para o modo amostrado
   dentro do pipeline; o verbo expander-certify aceita até LIMITE_EXAUSTIVO_MAXIMO.
"""
