# -*-coding:Utf-8 -*

"""
Ce module contient la tâche auxiliaire d'un groupe d'échantillons peu confiants.

- la classe ``TacheAuxiliaire``
- les fonctions ``construire_tache_auxiliaire()``, ``repartir_proportion()``, ``entrainer_auxiliaire()``
"""

from typing import Dict, List, Optional
import logging
import math
import numpy as np
from lib.configuration import ConfigurationExecution
from lib.donnees import JeuDonnees
from lib.erreurs import ErreurConfiguration
from lib.modele import ModeleEnCouches
from lib.numerique import Tableau, Graine, indices_top_k
from lib.optimiseur import EtatOptimiseur
from lib.pertes import ConfigurationScl, Lot, objectif_combine

journal = logging.getLogger(__name__)


class TacheAuxiliaire:
    """
    Jeu auxiliaire ``D_aux`` : les échantillons d'entraînement dont l'étiquette fait partie des ``K`` classes prédites.

    :param classes: classes retenues, par probabilité décroissante.
    :param indices: indices des échantillons d'entraînement retenus, triés.
    :param proportion: part des échantillons de chaque classe conservée.
    :param configuration: paramètres de l'entraînement auxiliaire.
    """

    def __init__(self, classes: List[int], indices: Tableau, proportion: float,
                 configuration: Optional[ConfigurationExecution] = None) -> None:
        self.classes = classes
        self.indices = indices
        self.proportion = proportion
        self.configuration = configuration if configuration is not None else ConfigurationExecution()

    def __len__(self) -> int:
        return int(self.indices.shape[0])


def repartir_proportion(effectifs: Dict[int, int], proportion: float) -> Dict[int, int]:
    """
    Répartit ``ceil(proportion · total)`` échantillons entre les classes : chaque classe reçoit la partie entière de sa
    part, le reste va aux plus grandes parties fractionnaires (égalités par classe croissante).

    :param effectifs: nombre d'échantillons par classe.
    :param proportion: proportion dans ``(0, 1]``.
    :return: nombre d'échantillons conservés par classe.
    """

    total = sum(effectifs.values())
    cible = math.ceil(proportion * total)
    parts = {classe: proportion * effectif for classe, effectif in effectifs.items()}
    repartition = {classe: min(effectifs[classe], int(math.floor(part))) for classe, part in parts.items()}
    restes = sorted(parts, key=lambda classe: (-(parts[classe] - math.floor(parts[classe])), classe))
    manquants = cible - sum(repartition.values())
    for classe in restes:
        if manquants <= 0:
            break
        if repartition[classe] < effectifs[classe]:
            repartition[classe] += 1
            manquants -= 1
    return repartition


def construire_tache_auxiliaire(etiquettes_entrainement: Tableau, centre: Tableau, k: int, proportion: float = 1.0,
                                graine: Graine = 0,
                                configuration: Optional[ConfigurationExecution] = None) -> TacheAuxiliaire:
    """
    Retient les ``K`` classes de plus forte probabilité de ``centre`` (égalités par classe croissante) et les échantillons
    d'entraînement de ces classes. Si ``proportion < 1``, un sous-échantillon uniforme est tiré classe par classe.

    :param etiquettes_entrainement: étiquettes du jeu d'entraînement.
    :param centre: vecteur softmax (centre de groupe ou prédiction d'un échantillon).
    :param k: nombre de classes ``K``, borné par ``C``.
    :param proportion: part du jeu auxiliaire conservée, dans ``(0, 1]``.
    :param graine: graine du sous-échantillonnage.
    :param configuration: paramètres de l'entraînement auxiliaire.
    :return: tâche auxiliaire.
    :raises ErreurConfiguration: si ``k < 1`` ou si ``proportion`` est hors de ``(0, 1]``.
    """

    if k < 1:
        raise ErreurConfiguration("K doit être positif")
    if not 0 < proportion <= 1:
        raise ErreurConfiguration("La proportion doit être comprise dans (0, 1]")
    etiquettes_entrainement = np.asarray(etiquettes_entrainement)
    classes = [int(classe) for classe in indices_top_k(centre, k)]
    par_classe = {classe: np.flatnonzero(etiquettes_entrainement == classe) for classe in classes}
    for classe, indices in par_classe.items():
        if not indices.shape[0]:
            journal.warning("La classe %d n'a aucun échantillon d'entraînement", classe)
    if proportion < 1:
        generateur = np.random.default_rng(graine)
        repartition = repartir_proportion({classe: int(indices.shape[0]) for classe, indices in par_classe.items()},
                                          proportion)
        retenus = [generateur.choice(par_classe[classe], size=repartition[classe], replace=False)
                   for classe in sorted(par_classe)]
    else:
        retenus = list(par_classe.values())
    indices = np.sort(np.concatenate(retenus)) if retenus else np.zeros(0, dtype=np.int64)
    return TacheAuxiliaire(classes, indices.astype(np.int64), proportion, configuration)


def entrainer_auxiliaire(modele: ModeleEnCouches, jeu: JeuDonnees, tache: TacheAuxiliaire,
                         graine: Graine = 0) -> List[float]:
    """
    Optimise ``L_ce + λ · L_scl`` sur ``D_aux`` pour les couches du suffixe entraînable, en place. Les étiquettes restent
    dans l'espace des ``C`` classes. Le taux d'apprentissage décroît par recuit cosinus sur
    ``epoques · ceil(|D_aux| / taille_lot)`` pas. L'appelant restaure l'instantané avant l'appel.

    :param modele: modèle modifié en place.
    :param jeu: jeu d'entraînement complet.
    :param tache: tâche auxiliaire et sa configuration.
    :param graine: graine du mélange et du bruit d'augmentation.
    :return: perte moyenne des lots de chaque époque.
    """

    configuration = tache.configuration
    if not len(tache):
        journal.warning("Jeu auxiliaire vide : aucun entraînement")
        return []
    if configuration.epoques == 0:
        return []
    debut = modele.debut_suffixe(configuration.suffixe)
    parametres = modele.parametres(debut)
    lots_par_epoque = math.ceil(len(tache) / configuration.taille_lot)
    optimiseur = EtatOptimiseur(parametres, configuration.lr_base, configuration.moment, configuration.decroissance,
                                configuration.epoques * lots_par_epoque)
    scl = ConfigurationScl(configuration.tau, configuration.lam)
    generateur = np.random.default_rng(graine)
    auxiliaire = jeu.sous_ensemble(tache.indices)
    entrees, etiquettes = auxiliaire.caracteristiques, auxiliaire.etiquettes
    pertes: List[float] = []
    for _ in range(configuration.epoques):
        ordre = generateur.permutation(len(tache))
        cumul = 0.0
        for depart in range(0, len(tache), configuration.taille_lot):
            selection = ordre[depart:depart + configuration.taille_lot]
            lot_entrees = entrees[selection]
            if configuration.bruit_augmentation > 0:
                lot_entrees = lot_entrees + generateur.normal(0.0, configuration.bruit_augmentation, lot_entrees.shape)
            perte, gradients = objectif_combine(modele, Lot(lot_entrees, etiquettes[selection]), scl, debut)
            optimiseur.pas(parametres, [tableau for paire in gradients for tableau in paire])
            cumul += perte
        pertes.append(cumul / lots_par_epoque)
    journal.debug("Entraînement auxiliaire : %d échantillons, pertes %s", len(tache), pertes)
    return pertes
