"""Pipeline de imersões de cliques em grafos K_{s,t}-livres."""
