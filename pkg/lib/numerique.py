# -*-coding:Utf-8 -*

"""
Ce module contient les noyaux numériques partagés par le modèle, les pertes et la sélection.

- les fonctions ``verifier_fini()``, ``softmax()``, ``log_softmax()``, ``logsumexp()``, ``relu()``
- les fonctions ``indices_top_k()``, ``empreinte()``, ``deriver_graine()``, ``initialiser_poids()``
"""

from typing import Iterable, Union
import hashlib
import numpy as np
from lib.erreurs import ErreurNumerique

# Alias de types
Tableau = np.ndarray
Graine = int


def verifier_fini(valeurs: Tableau, nom: str = "valeurs") -> None:
    """
    Vérifie que toutes les entrées d'un tableau sont des réels finis.

    :param valeurs: tableau à vérifier.
    :param nom: nom utilisé dans le message d'erreur.
    :raises ErreurNumerique: si une entrée vaut ``nan`` ou ``inf``.
    """

    if not np.all(np.isfinite(valeurs)):
        raise ErreurNumerique("Les {0} contiennent des valeurs non finies".format(nom))


def logsumexp(valeurs: Tableau, axe: int = -1) -> Tableau:
    """
    Calcule ``log(sum(exp(valeurs)))`` le long de ``axe`` en soustrayant le maximum.

    :param valeurs: tableau de réels finis.
    :param axe: axe de la réduction.
    :return: tableau réduit le long de ``axe``.
    """

    maximum = np.max(valeurs, axis=axe, keepdims=True)
    somme = np.sum(np.exp(valeurs - maximum), axis=axe, keepdims=True)
    return np.squeeze(maximum + np.log(somme), axis=axe)


def softmax(logits: Tableau) -> Tableau:
    """
    Transforme des logits en probabilités (vecteur ou matrice, une ligne par échantillon).
    Le maximum de chaque ligne est soustrait avant l'exponentielle.

    :param logits: logits finis, de forme ``(C,)`` ou ``(n, C)``.
    :return: probabilités de même forme, chaque ligne somme à 1.
    :raises ErreurNumerique: si un logit n'est pas fini.
    """

    logits = np.asarray(logits, dtype=np.float64)
    verifier_fini(logits, "logits")
    decales = logits - np.max(logits, axis=-1, keepdims=True)
    exponentielles = np.exp(decales)
    return exponentielles / np.sum(exponentielles, axis=-1, keepdims=True)


def log_softmax(logits: Tableau) -> Tableau:
    """
    Logarithme de ``softmax()`` calculé sans passer par les probabilités.

    :param logits: logits finis, de forme ``(n, C)``.
    :return: log-probabilités de forme ``(n, C)``.
    """

    return logits - logsumexp(logits, axe=-1)[..., np.newaxis]


def relu(valeurs: Tableau) -> Tableau:
    """
    :param valeurs: pré-activations.
    :return: ``max(0, valeurs)``.
    """

    return np.maximum(valeurs, 0.0)


def indices_top_k(valeurs: Tableau, k: int) -> Tableau:
    """
    Retourne les indices des ``k`` plus grandes valeurs par ordre décroissant.
    Les égalités sont départagées par indice croissant. ``k`` est borné par la taille du vecteur.

    :param valeurs: vecteur de réels.
    :param k: nombre d'indices à retourner.
    :return: indices triés.
    """

    ordre = np.argsort(-np.asarray(valeurs), kind='stable')
    return ordre[:max(0, min(k, ordre.shape[0]))]


def empreinte(tableaux: Iterable[Tableau]) -> str:
    """
    Calcule une empreinte SHA-256 du contenu binaire (float64 petit-boutiste, ordre C) et des formes des tableaux.

    :param tableaux: tableaux à hacher, dans l'ordre.
    :return: empreinte hexadécimale.
    """

    hachage = hashlib.sha256()
    for tableau in tableaux:
        contigu = np.ascontiguousarray(tableau, dtype='<f8')
        hachage.update(str(contigu.shape).encode('ascii'))
        hachage.update(contigu.tobytes())
    return hachage.hexdigest()


def deriver_graine(graine: Graine, usage: str, indice: Union[int, str] = 0) -> Graine:
    """
    Dérive une sous-graine stable à partir de la graine globale et d'un usage.
    Le résultat ne dépend ni du processus, ni de ``PYTHONHASHSEED``.

    :param graine: graine globale.
    :param usage: chaîne décrivant l'usage (par exemple ``"groupe"``).
    :param indice: indice de la tâche (groupe, valeur de balayage...).
    :return: sous-graine sur 63 bits.
    """

    cle = "{0}:{1}:{2}".format(graine, usage, indice).encode('utf-8')
    return int.from_bytes(hashlib.sha256(cle).digest()[:8], byteorder='little') >> 1


def initialiser_poids(generateur: np.random.Generator, entrees: int, sorties: int) -> Tableau:
    """
    Tire une matrice de poids uniforme dans ``±sqrt(6 / (entrees + sorties))``.

    :param generateur: générateur aléatoire initialisé.
    :param entrees: dimension d'entrée de la couche.
    :param sorties: dimension de sortie de la couche.
    :return: matrice de forme ``(entrees, sorties)``.
    """

    limite = np.sqrt(6.0 / (entrees + sorties))
    return generateur.uniform(-limite, limite, size=(entrees, sorties))
