"""Namespace dos pipelines do projeto (atualmente apenas clique_immersion)."""
