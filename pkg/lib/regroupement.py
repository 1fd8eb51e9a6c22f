# -*-coding:Utf-8 -*

"""
Ce module contient le regroupement des sorties softmax par K-means.

- les classes ``Groupe``, ``EnsembleGroupes``
- les fonctions ``kmeans_softmax()``, ``initialiser_kmeans_pp()``, ``inertie()``
"""

from typing import List, Optional, Sequence, Tuple, Final
import logging
import numpy as np
from lib.erreurs import ErreurConfiguration, ErreurDimension
from lib.numerique import Tableau, Graine, indices_top_k

journal = logging.getLogger(__name__)

iterations_par_defaut: Final[int] = 100


class Groupe:
    """
    Groupe d'échantillons peu confiants.

    :param membres: identifiants des échantillons, triés.
    :param centre: moyenne des vecteurs softmax des membres.
    :param classes_top_k: ``min(K, C)`` classes de plus forte probabilité du centre.
    """

    def __init__(self, membres: List[int], centre: Tableau, classes_top_k: List[int]) -> None:
        self.membres = membres
        self.centre = centre
        self.classes_top_k = classes_top_k


class EnsembleGroupes:
    """
    Résultat du regroupement. Les groupes sont ordonnés par plus petit identifiant membre.

    :param groupes: groupes formés.
    :param nombre_demande: nombre de groupes ``Q`` demandé.
    :param graine: graine du regroupement.
    """

    def __init__(self, groupes: List[Groupe], nombre_demande: int, graine: Graine) -> None:
        self.groupes = groupes
        self.nombre_demande = nombre_demande
        self.graine = graine

    def __len__(self) -> int:
        return len(self.groupes)


def distances_carrees(lignes: Tableau, centres: Tableau) -> Tableau:
    """
    :param lignes: matrice ``(m, C)``.
    :param centres: matrice ``(q, C)``.
    :return: matrice ``(m, q)`` des distances euclidiennes au carré.
    """

    return np.sum((lignes[:, np.newaxis, :] - centres[np.newaxis, :, :]) ** 2, axis=2)


def inertie(lignes: Tableau, affectations: Tableau) -> float:
    """
    Somme, sur les groupes, des distances au carré des membres à leur moyenne.

    :param lignes: matrice ``(m, C)``.
    :param affectations: indice de groupe de chaque ligne.
    :return: inertie intra-groupe.
    """

    total = 0.0
    for groupe in np.unique(affectations):
        membres = lignes[affectations == groupe]
        total += float(np.sum((membres - membres.mean(axis=0)) ** 2))
    return total


def initialiser_kmeans_pp(lignes: Tableau, nombre: int, generateur: np.random.Generator) -> Tableau:
    """
    Choisit ``nombre`` centres initiaux : le premier uniformément, les suivants avec une probabilité proportionnelle au carré
    de la distance au centre le plus proche.

    :param lignes: matrice ``(m, C)``.
    :param nombre: nombre de centres.
    :param generateur: générateur aléatoire initialisé.
    :return: matrice ``(nombre, C)``.
    """

    centres = [lignes[generateur.integers(lignes.shape[0])]]
    plus_proches = np.sum((lignes - centres[0]) ** 2, axis=1)
    for _ in range(1, nombre):
        total = plus_proches.sum()
        if total > 0:
            indice = int(generateur.choice(lignes.shape[0], p=plus_proches / total))
        else:
            indice = int(generateur.integers(lignes.shape[0]))
        centres.append(lignes[indice])
        plus_proches = np.minimum(plus_proches, np.sum((lignes - lignes[indice]) ** 2, axis=1))
    return np.array(centres)


def _reparer_groupes_vides(lignes: Tableau, affectations: Tableau, centres: Tableau, nombre: int) -> None:
    """
    Donne à chaque groupe vide le point le plus éloigné de son centre, pris dans un groupe de plus d'un membre.
    Modifie ``affectations`` et ``centres`` en place.
    """

    for groupe in range(nombre):
        if np.any(affectations == groupe):
            continue
        tailles = np.bincount(affectations, minlength=nombre)
        eloignements = np.sum((lignes - centres[affectations]) ** 2, axis=1)
        eloignements[tailles[affectations] <= 1] = -1.0
        indice = int(np.argmax(eloignements))
        source = affectations[indice]
        affectations[indice] = groupe
        centres[groupe] = lignes[indice]
        centres[source] = lignes[affectations == source].mean(axis=0)


def _lloyd(lignes: Tableau, nombre: int, graine: Graine, iterations_max: int) -> Tuple[Tableau, Tableau]:
    """
    Itère affectation et mise à jour jusqu'au point fixe des affectations ou ``iterations_max``.

    :return: ``(affectations, centres)``.
    """

    generateur = np.random.default_rng(graine)
    centres = initialiser_kmeans_pp(lignes, nombre, generateur)
    affectations = np.argmin(distances_carrees(lignes, centres), axis=1)
    for iteration in range(iterations_max):
        centres = np.array([lignes[affectations == groupe].mean(axis=0) if np.any(affectations == groupe)
                            else centres[groupe] for groupe in range(nombre)])
        _reparer_groupes_vides(lignes, affectations, centres, nombre)
        nouvelles = np.argmin(distances_carrees(lignes, centres), axis=1)
        if np.array_equal(nouvelles, affectations):
            journal.debug("K-means convergé en %d itérations", iteration + 1)
            break
        affectations = nouvelles
    else:
        journal.info("K-means arrêté après %d itérations sans point fixe", iterations_max)
    return affectations, centres


def kmeans_softmax(lignes: Tableau, nombre: int, graine: Graine, iterations_max: int = iterations_par_defaut,
                   identifiants: Optional[Sequence[int]] = None, k: int = 10) -> EnsembleGroupes:
    """
    Regroupe les vecteurs softmax des échantillons peu confiants.

    Si ``nombre`` est supérieur ou égal au nombre de lignes distinctes, chaque ligne distincte forme un groupe (les doublons
    sont réunis). Sinon, initialisation K-means++ puis itérations de Lloyd ; un groupe vide reçoit le point le plus éloigné
    de son centre.

    :param lignes: matrice ``(m, C)`` de vecteurs softmax.
    :param nombre: nombre de groupes ``Q``.
    :param graine: graine de l'initialisation.
    :param iterations_max: nombre maximal d'itérations de Lloyd.
    :param identifiants: identifiant de chaque ligne, ``0 .. m-1`` par défaut.
    :param k: nombre de classes retenues par centre.
    :return: groupes ordonnés par plus petit identifiant membre.
    :raises ErreurConfiguration: si ``nombre < 1`` ou si aucune ligne n'est fournie.
    """

    lignes = np.asarray(lignes, dtype=np.float64)
    if lignes.ndim != 2 or lignes.shape[0] < 1:
        raise ErreurConfiguration("Le regroupement demande au moins une ligne")
    if nombre < 1:
        raise ErreurConfiguration("Le nombre de groupes doit être positif")
    if identifiants is None:
        identifiants = list(range(lignes.shape[0]))
    if len(identifiants) != lignes.shape[0]:
        raise ErreurDimension("{0} identifiants pour {1} lignes".format(len(identifiants), lignes.shape[0]))

    _, premieres, inverses = np.unique(lignes, axis=0, return_index=True, return_inverse=True)
    inverses = np.asarray(inverses).reshape(-1)
    if nombre >= premieres.shape[0]:
        affectations = inverses
    else:
        affectations, _ = _lloyd(lignes, nombre, graine, iterations_max)

    groupes: List[Groupe] = []
    for groupe in np.unique(affectations):
        positions = np.flatnonzero(affectations == groupe)
        centre = lignes[positions].mean(axis=0)
        groupes.append(Groupe(sorted(int(identifiants[position]) for position in positions), centre,
                              [int(classe) for classe in indices_top_k(centre, k)]))
    groupes.sort(key=lambda groupe: groupe.membres[0])
    journal.info("%d groupes formés pour %d échantillons", len(groupes), lignes.shape[0])
    return EnsembleGroupes(groupes, nombre, graine)
