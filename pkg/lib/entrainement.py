# -*-coding:Utf-8 -*

"""
Ce module contient l'entraînement du modèle de base et la mesure de précision.

- la classe ``SpecModele``
- les fonctions ``entrainer_base()``, ``entrainer_jusqu_a()``, ``precision_top_k()``, ``perte_moyenne()``
"""

from typing import List, Optional, Sequence, Tuple, Final
import logging
import math
import numpy as np
from lib.donnees import JeuDonnees
from lib.erreurs import ErreurConfiguration, ErreurDonnees
from lib.modele import ModeleEnCouches
from lib.numerique import Graine, deriver_graine
from lib.optimiseur import EtatOptimiseur
from lib.pertes import entropie_croisee

journal = logging.getLogger(__name__)

# Nombres d'époques essayés, dans l'ordre, pour atteindre une précision cible
paliers_epoques: Final[Tuple[int, ...]] = (1, 2, 3, 4, 6, 8, 12, 16, 20)


class SpecModele:
    """
    Architecture et hyper-paramètres d'entraînement du modèle de base.

    :param couches_cachees: largeur de chaque couche cachée.
    :param separation: nombre de couches superficielles, la moitié par défaut.
    :param taille_lot: taille des lots.
    :param lr_base: taux d'apprentissage initial, décroissance cosinus sur l'ensemble de l'entraînement.
    :param moment: moment du SGD.
    :param decroissance: pénalité L2.
    """

    def __init__(self, couches_cachees: Sequence[int] = (64, 64), separation: Optional[int] = None,
                 taille_lot: int = 64, lr_base: float = 0.05, moment: float = 0.9, decroissance: float = 1e-4) -> None:
        self.couches_cachees = list(couches_cachees)
        self.separation = separation
        self.taille_lot = taille_lot
        self.lr_base = lr_base
        self.moment = moment
        self.decroissance = decroissance

    def dimensions(self, dimension_entree: int, nombre_classes: int) -> List[int]:
        """
        :return: ``[d, h1, ..., C]``.
        """

        return [dimension_entree] + self.couches_cachees + [nombre_classes]


def entrainer_base(spec: SpecModele, jeu: JeuDonnees, epoques: int, graine: Graine) -> Tuple[ModeleEnCouches, List[float]]:
    """
    Entraîne un modèle initialisé aléatoirement par entropie croisée sur toutes ses couches.
    Un petit nombre d'époques laisse au modèle une marge que la boucle fermée peut exploiter.

    :param spec: architecture et hyper-paramètres.
    :param jeu: jeu d'entraînement.
    :param epoques: nombre d'époques, 0 pour le modèle initial.
    :param graine: graine de l'initialisation et du mélange.
    :return: ``(modele, pertes)`` où ``pertes`` est la perte moyenne des lots de chaque époque.
    :raises ErreurDonnees: si le jeu est vide.
    :raises ErreurConfiguration: si le nombre d'époques est négatif.
    """

    if not len(jeu):
        raise ErreurDonnees("Le jeu d'entraînement est vide")
    if epoques < 0:
        raise ErreurConfiguration("Le nombre d'époques doit être positif ou nul")
    modele = ModeleEnCouches.creer(spec.dimensions(jeu.dimension, jeu.nombre_classes),
                                   deriver_graine(graine, "initialisation"), spec.separation)
    pertes: List[float] = []
    if epoques == 0:
        return modele, pertes
    lots_par_epoque = math.ceil(len(jeu) / spec.taille_lot)
    parametres = modele.parametres()
    optimiseur = EtatOptimiseur(parametres, spec.lr_base, spec.moment, spec.decroissance, epoques * lots_par_epoque)
    generateur = np.random.default_rng(deriver_graine(graine, "melange"))
    for epoque in range(epoques):
        ordre = generateur.permutation(len(jeu))
        cumul = 0.0
        for debut in range(0, len(jeu), spec.taille_lot):
            indices = ordre[debut:debut + spec.taille_lot]
            propagation = modele.propager_lot(jeu.caracteristiques[indices])
            perte, gradient_logits = entropie_croisee(propagation.logits, jeu.etiquettes[indices])
            gradients = modele.retropropager(propagation, gradient_logits)
            optimiseur.pas(parametres, [tableau for paire in gradients for tableau in paire])
            cumul += perte
        pertes.append(cumul / lots_par_epoque)
        journal.info("Époque %d/%d : perte %.4f", epoque + 1, epoques, pertes[-1])
    return modele, pertes


def entrainer_jusqu_a(spec: SpecModele, entrainement: JeuDonnees, test: JeuDonnees, cible: float, graine: Graine,
                      paliers: Sequence[int] = paliers_epoques) -> Tuple[ModeleEnCouches, int, float]:
    """
    Sous-entraîne volontairement le modèle de base : essaie les paliers d'époques dans l'ordre et garde le premier
    modèle dont la précision top-1 sur ``test`` atteint ``cible``. Chaque palier repart de l'initialisation, le recuit
    cosinus couvrant tout le palier.

    :param spec: architecture et hyper-paramètres.
    :param entrainement: jeu d'entraînement.
    :param test: jeu sur lequel la cible est mesurée.
    :param cible: précision top-1 visée, dans ``(0, 1]``.
    :param graine: graine de chaque entraînement.
    :param paliers: nombres d'époques croissants.
    :return: ``(modele, epoques, precision)``, le dernier palier si la cible n'est jamais atteinte.
    :raises ErreurConfiguration: si ``paliers`` est vide ou ``cible`` hors de ``(0, 1]``.
    """

    if not paliers:
        raise ErreurConfiguration("Au moins un palier d'époques est nécessaire")
    if not 0 < cible <= 1:
        raise ErreurConfiguration("La précision cible doit être comprise dans (0, 1]")
    for epoques in paliers:
        modele, _ = entrainer_base(spec, entrainement, epoques, graine)
        precision = precision_top_k(modele, test)
        journal.info("%d époques : précision top-1 %.4f", epoques, precision)
        if precision >= cible:
            break
    else:
        journal.warning("Précision cible %.2f non atteinte après %d époques", cible, paliers[-1])
    return modele, epoques, precision


def precision_top_k(modele: ModeleEnCouches, jeu: JeuDonnees, k: int = 1) -> float:
    """
    :param modele: modèle évalué.
    :param jeu: jeu évalué.
    :param k: la prédiction est juste si l'étiquette est parmi les ``k`` plus grands logits (``k`` borné par ``C``).
    :return: part des échantillons bien classés.
    """

    if not len(jeu):
        return 0.0
    _, logits = modele.propager(jeu.caracteristiques)
    k = max(1, min(k, logits.shape[1]))
    ordre = np.argsort(-logits, axis=1, kind='stable')[:, :k]
    return float(np.mean(np.any(ordre == jeu.etiquettes[:, np.newaxis], axis=1)))


def perte_moyenne(modele: ModeleEnCouches, jeu: JeuDonnees) -> float:
    """
    :return: entropie croisée moyenne du modèle sur le jeu complet.
    """

    _, logits = modele.propager(jeu.caracteristiques)
    return entropie_croisee(logits, jeu.etiquettes)[0]
