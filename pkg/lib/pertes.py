# -*-coding:Utf-8 -*

"""
Ce module définit les pertes de l'entraînement auxiliaire.

- les classes ``ConfigurationScl``, ``Lot``
- les fonctions ``entropie_croisee()``, ``contrastive_supervisee()``, ``objectif_combine()``
"""

from typing import List, Tuple, Optional
import logging
import numpy as np
from lib.erreurs import ErreurConfiguration, ErreurDimension, ErreurEtiquette
from lib.modele import ModeleEnCouches, Gradient
from lib.numerique import Tableau, log_softmax, softmax, verifier_fini

journal = logging.getLogger(__name__)

# Norme en dessous de laquelle une caractéristique n'est plus normalisée
norme_minimale = 1e-12


class ConfigurationScl:
    """
    Paramètres de la perte contrastive supervisée.

    :param tau: température, strictement positive.
    :param lam: poids de la perte contrastive dans l'objectif combiné.
    """

    def __init__(self, tau: float = 0.07, lam: float = 1.0) -> None:
        """
        :raises ErreurConfiguration: si ``tau <= 0`` ou ``lam < 0``.
        """

        if not tau > 0:
            raise ErreurConfiguration("La température doit être strictement positive")
        if not lam >= 0:
            raise ErreurConfiguration("Le poids de la perte contrastive doit être positif ou nul")
        self.tau = tau
        self.lam = lam


class Lot:
    """
    Lot d'entraînement.

    :param entrees: matrice ``(n, d)``.
    :param etiquettes: ``n`` indices de classe.
    """

    def __init__(self, entrees: Tableau, etiquettes: Tableau) -> None:
        """
        :raises ErreurDimension: si le lot est vide ou si les tailles diffèrent.
        """

        self.entrees = np.asarray(entrees, dtype=np.float64)
        self.etiquettes = np.asarray(etiquettes, dtype=np.int64)
        if self.entrees.ndim != 2 or self.entrees.shape[0] < 1 or self.etiquettes.shape != (self.entrees.shape[0],):
            raise ErreurDimension("Lot invalide : entrées {0}, étiquettes {1}".format(
                self.entrees.shape, self.etiquettes.shape))

    def __len__(self) -> int:
        return int(self.entrees.shape[0])


def verifier_etiquettes(etiquettes: Tableau, nombre_classes: int) -> None:
    """
    :param etiquettes: indices de classe.
    :param nombre_classes: nombre de classes ``C``.
    :raises ErreurEtiquette: si une étiquette n'est pas dans ``[0, C)``.
    """

    if etiquettes.size and (etiquettes.min() < 0 or etiquettes.max() >= nombre_classes):
        raise ErreurEtiquette("Étiquette hors de [0, {0})".format(nombre_classes))


def entropie_croisee(logits: Tableau, etiquettes: Tableau) -> Tuple[float, Tableau]:
    """
    Entropie croisée moyenne sur le lot et son gradient ``(softmax − one_hot) / n``.

    :param logits: matrice ``(n, C)``.
    :param etiquettes: ``n`` indices de classe.
    :return: ``(perte, gradient_logits)``.
    :raises ErreurEtiquette: si une étiquette est hors domaine.
    :raises ErreurNumerique: si un logit n'est pas fini.
    """

    logits = np.asarray(logits, dtype=np.float64)
    etiquettes = np.asarray(etiquettes, dtype=np.int64)
    verifier_fini(logits, "logits")
    verifier_etiquettes(etiquettes, logits.shape[1])
    nombre = logits.shape[0]
    lignes = np.arange(nombre)
    perte = -float(np.mean(log_softmax(logits)[lignes, etiquettes]))
    gradient = softmax(logits)
    gradient[lignes, etiquettes] -= 1.0
    return perte, gradient / nombre


def contrastive_supervisee(caracteristiques: Tableau, etiquettes: Tableau,
                           configuration: ConfigurationScl) -> Tuple[float, Tableau]:
    """
    Perte contrastive supervisée sur les caractéristiques normalisées ``u = f / ||f||``.

    Pour chaque ancre ``i``, ``P_i`` contient les autres échantillons de même classe et ``A_i`` tous les autres
    échantillons. La contribution de l'ancre est
    ``-1/(n |P_i|) · Σ_{p ∈ P_i} log(exp(u_i·u_p/τ) / Σ_{a ∈ A_i} exp(u_i·u_a/τ))``.
    Les ancres sans positif ne contribuent pas. Le gradient traverse la normalisation.

    :param caracteristiques: matrice ``(n, f)`` non normalisée.
    :param etiquettes: ``n`` indices de classe.
    :param configuration: température ``tau``.
    :return: ``(perte, gradient_caracteristiques)``. ``(0, 0)`` avec un avertissement si aucune ancre n'a de positif.
    """

    caracteristiques = np.asarray(caracteristiques, dtype=np.float64)
    etiquettes = np.asarray(etiquettes)
    verifier_fini(caracteristiques, "caractéristiques")
    nombre = caracteristiques.shape[0]
    gradient = np.zeros_like(caracteristiques)

    autres = ~np.eye(nombre, dtype=bool)
    positifs = (etiquettes[:, np.newaxis] == etiquettes[np.newaxis, :]) & autres
    cardinaux = positifs.sum(axis=1)
    if nombre < 2 or not np.any(cardinaux):
        journal.warning("Lot dégénéré pour la perte contrastive : aucune ancre n'a de positif")
        return 0.0, gradient

    normes = np.linalg.norm(caracteristiques, axis=1, keepdims=True)
    bornees = np.maximum(normes, norme_minimale)
    unitaires = caracteristiques / bornees
    similarites = unitaires @ unitaires.T / configuration.tau

    # Log-softmax de chaque ligne restreint à A_i
    masquees = np.where(autres, similarites, -np.inf)
    maximum = np.max(masquees, axis=1, keepdims=True)
    exponentielles = np.where(autres, np.exp(masquees - maximum), 0.0)
    sommes = np.sum(exponentielles, axis=1, keepdims=True)
    log_normalisation = maximum + np.log(sommes)
    probabilites = exponentielles / sommes

    poids = np.where(cardinaux > 0, 1.0 / (nombre * np.maximum(cardinaux, 1)), 0.0)
    termes = np.where(positifs, similarites - log_normalisation, 0.0)
    perte = -float(np.sum(poids * np.sum(termes, axis=1)))

    gradient_similarites = poids[:, np.newaxis] * (cardinaux[:, np.newaxis] * probabilites - positifs)
    gradient_unitaires = (gradient_similarites + gradient_similarites.T) @ unitaires / configuration.tau
    projection = np.sum(unitaires * gradient_unitaires, axis=1, keepdims=True)
    normalisees = normes >= norme_minimale
    gradient = np.where(normalisees, (gradient_unitaires - unitaires * projection) / bornees,
                        gradient_unitaires / bornees)
    return perte, gradient


def objectif_combine(modele: ModeleEnCouches, lot: Lot, configuration: ConfigurationScl,
                     debut: int = 0, perte_contrastive: Optional[bool] = None) -> Tuple[float, List[Gradient]]:
    """
    Objectif ``L_ce + λ · L_scl`` évalué sur un même lot, la perte contrastive portant sur ``z``.
    Les gradients sont limités aux couches ``debut .. L-1``.

    :param modele: modèle évalué.
    :param lot: lot d'entraînement.
    :param configuration: ``tau`` et ``lam``.
    :param debut: indice de la première couche entraînée.
    :param perte_contrastive: force (ou désactive) le calcul de la perte contrastive. Par défaut si ``lam > 0``.
    :return: ``(perte, gradients)`` au format de ``ModeleEnCouches.retropropager()``.
    """

    propagation = modele.propager_lot(lot.entrees)
    perte, gradient_logits = entropie_croisee(propagation.logits, lot.etiquettes)
    gradient_caracteristiques: Optional[Tableau] = None
    if perte_contrastive is None:
        perte_contrastive = configuration.lam > 0
    if perte_contrastive:
        perte_scl, gradient_scl = contrastive_supervisee(propagation.caracteristiques, lot.etiquettes, configuration)
        perte += configuration.lam * perte_scl
        gradient_caracteristiques = configuration.lam * gradient_scl
    gradients = modele.retropropager(propagation, gradient_logits, gradient_caracteristiques, debut)
    return perte, gradients
