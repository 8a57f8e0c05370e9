"""Bundled 2-primary stable-stem records through stem 20.

Groups and generator names follow the standard tables; products are the
handful of compositions the classification arguments lean on.  The stem
8 group carries two labelings in the literature; they differ by the
relation eta*sigma = nu-bar + epsilon (visible unstably, where the
Whitehead square accounts for the difference before suspending), so the
composite label is kept as a resolvable relation rather than a third
generator.
"""

from __future__ import annotations

BUNDLED_STEMS = {
    "schema": 1,
    "stems": [
        {"k": 1, "cyclic_orders": [2], "im_j_order": 2,
         "generators": [{"label": "eta", "aliases": ["h1"], "im_j": True, "mu_family": False}],
         "products": [], "notes": []},
        {"k": 2, "cyclic_orders": [2], "im_j_order": 1,
         "generators": [{"label": "eta^2", "aliases": ["h1^2"], "im_j": False, "mu_family": False}],
         "products": [], "notes": ["Kervaire invariant one class"]},
        {"k": 3, "cyclic_orders": [8], "im_j_order": 8,
         "generators": [{"label": "nu", "aliases": ["h2"], "im_j": True, "mu_family": False}],
         "products": [], "notes": []},
        {"k": 4, "cyclic_orders": [], "im_j_order": 1, "generators": [], "products": [],
         "notes": []},
        {"k": 5, "cyclic_orders": [], "im_j_order": 1, "generators": [], "products": [],
         "notes": []},
        {"k": 6, "cyclic_orders": [2], "im_j_order": 1,
         "generators": [{"label": "nu^2", "aliases": ["h2^2"], "im_j": False, "mu_family": False}],
         "products": [], "notes": ["Kervaire invariant one class"]},
        {"k": 7, "cyclic_orders": [16], "im_j_order": 16,
         "generators": [{"label": "sigma", "aliases": ["h3"], "im_j": True, "mu_family": False}],
         "products": [], "notes": []},
        {"k": 8, "cyclic_orders": [2, 2], "im_j_order": 2,
         "generators": [
             {"label": "nu-bar", "aliases": ["nubar"], "im_j": False, "mu_family": False},
             {"label": "epsilon", "aliases": ["eps"], "im_j": False, "mu_family": False}],
         "products": [],
         "relations": [{"label": "eta*sigma", "sum": ["nu-bar", "epsilon"], "im_j": True}],
         "notes": ["two labelings in use: {eta*sigma, epsilon} and {nu-bar, epsilon}"]},
        {"k": 9, "cyclic_orders": [2, 2, 2], "im_j_order": 2,
         "generators": [
             {"label": "nu^3", "aliases": ["h2^3"], "im_j": False, "mu_family": False},
             {"label": "mu9", "aliases": ["mu"], "im_j": False, "mu_family": True},
             {"label": "eta*epsilon", "aliases": [], "im_j": False, "mu_family": False}],
         "products": [], "notes": ["im J generator is a sum of listed generators"]},
        {"k": 10, "cyclic_orders": [2], "im_j_order": 1,
         "generators": [{"label": "eta*mu9", "aliases": ["eta*mu"], "im_j": False,
                         "mu_family": True}],
         "products": [], "notes": []},
        {"k": 11, "cyclic_orders": [8], "im_j_order": 8,
         "generators": [{"label": "zeta11", "aliases": ["zeta"], "im_j": True,
                         "mu_family": False}],
         "products": [], "notes": []},
        {"k": 12, "cyclic_orders": [], "im_j_order": 1, "generators": [], "products": [],
         "notes": []},
        {"k": 13, "cyclic_orders": [], "im_j_order": 1, "generators": [], "products": [],
         "notes": []},
        {"k": 14, "cyclic_orders": [2, 2], "im_j_order": 1,
         "generators": [
             {"label": "sigma^2", "aliases": ["h3^2"], "im_j": False, "mu_family": False},
             {"label": "kappa", "aliases": ["d0-class"], "im_j": False, "mu_family": False}],
         "products": [], "notes": ["sigma^2 has Kervaire invariant one"]},
        {"k": 15, "cyclic_orders": [32, 2], "im_j_order": 32,
         "generators": [
             {"label": "rho", "aliases": [], "im_j": True, "mu_family": False},
             {"label": "eta*kappa", "aliases": [], "im_j": False, "mu_family": False}],
         "products": [], "notes": []},
        {"k": 16, "cyclic_orders": [2, 2], "im_j_order": 2,
         "generators": [
             {"label": "[Pc0]", "aliases": ["eta*rho"], "im_j": True, "mu_family": False},
             {"label": "eta4", "aliases": ["[h1h4]", "eta*"], "im_j": False,
              "mu_family": False}],
         "products": [], "notes": ["eta4 generates the cokernel of J"]},
        {"k": 17, "cyclic_orders": [2, 2, 2, 2], "im_j_order": 2,
         "generators": [
             {"label": "eta*eta4", "aliases": ["[h1^2h4]"], "im_j": False, "mu_family": False},
             {"label": "nu*kappa", "aliases": [], "im_j": False, "mu_family": False},
             {"label": "mu17", "aliases": [], "im_j": False, "mu_family": True},
             {"label": "eta^2*rho", "aliases": [], "im_j": True, "mu_family": False}],
         "products": [], "notes": []},
        {"k": 18, "cyclic_orders": [8, 2], "im_j_order": 1,
         "generators": [
             {"label": "[h2h4]", "aliases": ["nu4"], "im_j": False, "mu_family": False},
             {"label": "eta*mu17", "aliases": [], "im_j": False, "mu_family": True}],
         "products": [],
         "notes": ["[h2h4] generates the order-8 kernel of the map to degree-18 ko"]},
        {"k": 19, "cyclic_orders": [8, 2], "im_j_order": 8,
         "generators": [
             {"label": "j19", "aliases": [], "im_j": True, "mu_family": False},
             {"label": "sigma-bar", "aliases": ["[c1]"], "im_j": False, "mu_family": False}],
         "products": [], "notes": []},
        {"k": 20, "cyclic_orders": [8], "im_j_order": 1,
         "generators": [{"label": "kappa-bar", "aliases": ["[g]"], "im_j": False,
                         "mu_family": False}],
         "products": [], "notes": []},
    ],
    "products": [
        {"a": "sigma", "b": "nu^3", "result": "0"},
        {"a": "sigma", "b": "mu9", "result": "eta*rho",
         "note": "lands in the image of J"},
        {"a": "sigma", "b": "eta*epsilon", "result": "0"},
        {"a": "nu-bar", "b": "eta*mu9", "result": "0"},
        {"a": "epsilon", "b": "eta*mu9", "result": "0",
         "note": "equals eta^3*rho = 4 nu rho = 0"},
    ],
}
