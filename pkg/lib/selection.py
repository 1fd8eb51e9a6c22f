# -*-coding:Utf-8 -*

"""
Ce module définit la détection des échantillons peu confiants.

- les classes ``GenreScore``, ``Prediction``, ``Partage``
- les fonctions ``score()``, ``scores_lot()``, ``predire()``, ``partager_par_confiance()``, ``seuil_quantile()``,
  ``courbe_f1t5()``, ``ecrire_courbe_f1t5()``
"""

from typing import Iterable, List, Optional, Sequence, Set, Tuple
from enum import Enum
import csv
import numpy as np
from lib.erreurs import ErreurConfiguration, ErreurDimension
from lib.modele import ModeleEnCouches
from lib.numerique import Tableau, indices_top_k, logsumexp, softmax, verifier_fini

# Alias de types
Identifiant = int
PointCourbe = Tuple[int, float]


class GenreScore(Enum):
    """
    Scores de confiance comparés. Pour tous les genres, une valeur plus grande signifie une prédiction plus confiante.
    """

    softmax_max = "softmax_max"
    entropie = "entropy"
    energie = "energy"

    @classmethod
    def depuis(cls, valeur: str) -> 'GenreScore':
        """
        :param valeur: nom du genre (``softmax_max``, ``entropy`` ou ``energy``).
        :return: genre correspondant.
        :raises ErreurConfiguration: si le genre est inconnu.
        """

        try:
            return cls(valeur)
        except ValueError:
            raise ErreurConfiguration("Score inconnu : <{0}>".format(valeur))


def score(valeurs: Tableau, genre: GenreScore, temperature: float = 1.0) -> float:
    """
    Calcule le score de confiance d'un échantillon.

    - ``softmax_max`` : ``max(p)`` sur les probabilités.
    - ``entropy`` : ``−H(p) = Σ p log p`` sur les probabilités (0 pour une distribution certaine).
    - ``energy`` : ``T · log Σ exp(logit / T)`` sur les logits, opposé de l'énergie.

    :param valeurs: probabilités (``softmax_max``, ``entropy``) ou logits (``energy``).
    :param genre: genre de score.
    :param temperature: température de l'énergie.
    :return: score, plus grand pour une prédiction plus confiante.
    :raises ErreurNumerique: si une valeur n'est pas finie.
    """

    return float(scores_lot(np.asarray(valeurs, dtype=np.float64)[np.newaxis, :], genre, temperature)[0])


def scores_lot(valeurs: Tableau, genre: GenreScore, temperature: float = 1.0) -> Tableau:
    """
    Version vectorisée de ``score()`` : une ligne par échantillon.

    :param valeurs: matrice ``(n, C)`` de probabilités ou de logits selon ``genre``.
    :param genre: genre de score.
    :param temperature: température de l'énergie.
    :return: vecteur de ``n`` scores.
    """

    valeurs = np.asarray(valeurs, dtype=np.float64)
    verifier_fini(valeurs, "valeurs de score")
    if genre is GenreScore.softmax_max:
        return np.max(valeurs, axis=1)
    if genre is GenreScore.entropie:
        termes = np.where(valeurs > 0, valeurs * np.log(np.where(valeurs > 0, valeurs, 1.0)), 0.0)
        return np.sum(termes, axis=1)
    return temperature * logsumexp(valeurs / temperature, axe=1)


class Prediction:
    """
    Prédiction d'un échantillon de test.

    :param identifiant: identifiant de l'échantillon.
    :param logits: logits du modèle.
    :param probabilites: ``softmax(logits)``.
    :param top_k: classes par probabilité décroissante, égalités par indice croissant.
    :param confiance: score de confiance.
    :param genre: genre du score.
    """

    def __init__(self, identifiant: Identifiant, logits: Tableau, probabilites: Tableau, top_k: List[int],
                 confiance: float, genre: GenreScore) -> None:
        self.identifiant = identifiant
        self.logits = logits
        self.probabilites = probabilites
        self.top_k = top_k
        self.confiance = confiance
        self.genre = genre

    @property
    def top1(self) -> int:
        return self.top_k[0]


def predire(modele: ModeleEnCouches, entrees: Tableau, identifiants: Optional[Sequence[Identifiant]] = None,
            genre: GenreScore = GenreScore.softmax_max, k: int = 5, temperature: float = 1.0) -> List[Prediction]:
    """
    Prédit un lot et calcule la confiance de chaque échantillon.

    :param modele: modèle entraîné.
    :param entrees: matrice ``(n, d)``.
    :param identifiants: identifiants des échantillons, ``0 .. n-1`` par défaut.
    :param genre: genre du score de confiance.
    :param k: longueur de la liste ``top_k`` (bornée par ``C``).
    :param temperature: température de l'énergie.
    :return: une prédiction par ligne.
    """

    _, logits = modele.propager(np.asarray(entrees, dtype=np.float64))
    probabilites = softmax(logits)
    if identifiants is None:
        identifiants = range(logits.shape[0])
    if len(identifiants) != logits.shape[0]:
        raise ErreurDimension("{0} identifiants pour {1} échantillons".format(len(identifiants), logits.shape[0]))
    confiances = scores_lot(logits if genre is GenreScore.energie else probabilites, genre, temperature)
    return [Prediction(int(identifiant), logits[ligne], probabilites[ligne],
                       [int(classe) for classe in indices_top_k(probabilites[ligne], k)], float(confiances[ligne]), genre)
            for ligne, identifiant in enumerate(identifiants)]


class Partage:
    """
    Séparation des échantillons confiants (``S ≥ ε``) et peu confiants (``S < ε``).

    :param hauts: identifiants confiants.
    :param bas: identifiants peu confiants.
    :param epsilon: seuil appliqué.
    """

    def __init__(self, hauts: Set[Identifiant], bas: Set[Identifiant], epsilon: float) -> None:
        self.hauts = hauts
        self.bas = bas
        self.epsilon = epsilon


def partager_par_confiance(predictions: Iterable[Prediction], epsilon: float) -> Partage:
    """
    Sépare les prédictions selon le seuil ``epsilon`` : un score égal au seuil est confiant.

    :param predictions: prédictions à séparer.
    :param epsilon: seuil, dans ``(0, 1]`` pour ``softmax_max``.
    :return: partage des identifiants.
    :raises ErreurConfiguration: si le seuil n'est pas fini ou hors de ``(0, 1]`` pour ``softmax_max``.
    """

    predictions = list(predictions)
    if not np.isfinite(epsilon):
        raise ErreurConfiguration("Le seuil doit être fini")
    if any(prediction.genre is GenreScore.softmax_max for prediction in predictions) and not 0 < epsilon <= 1:
        raise ErreurConfiguration("Le seuil de softmax_max doit être compris dans (0, 1]")
    hauts = {prediction.identifiant for prediction in predictions if prediction.confiance >= epsilon}
    bas = {prediction.identifiant for prediction in predictions if prediction.confiance < epsilon}
    return Partage(hauts, bas, epsilon)


def seuil_quantile(confiances: Sequence[float], fraction_haute: float) -> float:
    """
    Calibre un seuil brut pour les scores non probabilistes : ``fraction_haute`` est la part des échantillons gardés
    confiants. Le seuil retenu est le plus petit score parmi les ``ceil(fraction_haute · n)`` plus grands.

    :param confiances: scores observés.
    :param fraction_haute: part d'échantillons confiants, dans ``(0, 1]``.
    :return: seuil à passer à ``partager_par_confiance()``.
    :raises ErreurConfiguration: si la fraction est hors domaine ou si aucun score n'est fourni.
    """

    if not 0 < fraction_haute <= 1:
        raise ErreurConfiguration("La fraction confiante doit être comprise dans (0, 1]")
    if not len(confiances):
        raise ErreurConfiguration("Aucun score pour calibrer le seuil")
    tries = np.sort(np.asarray(confiances, dtype=np.float64))[::-1]
    gardes = int(np.ceil(fraction_haute * tries.shape[0]))
    return float(tries[gardes - 1])


def courbe_f1t5(predictions: Sequence[Prediction], etiquettes: Sequence[int]) -> List[PointCourbe]:
    """
    Trie les prédictions par confiance croissante (égalités par identifiant croissant) et calcule, pour chaque préfixe de
    taille ``m``, la part des échantillons dont le top-1 est faux mais le top-5 est juste.

    :param predictions: prédictions dont ``top_k`` contient au moins ``min(5, C)`` classes.
    :param etiquettes: étiquette vraie de chaque prédiction, dans le même ordre.
    :return: points ``(m, ratio)`` pour ``m = 1 .. n``.
    :raises ErreurDimension: si les longueurs diffèrent.
    """

    if len(predictions) != len(etiquettes):
        raise ErreurDimension("{0} prédictions pour {1} étiquettes".format(len(predictions), len(etiquettes)))
    ordre = sorted(range(len(predictions)), key=lambda i: (predictions[i].confiance, predictions[i].identifiant))
    courbe: List[PointCourbe] = []
    compte = 0
    for taille, indice in enumerate(ordre, start=1):
        prediction = predictions[indice]
        top5 = prediction.top_k[:min(5, prediction.probabilites.shape[0])]
        if prediction.top1 != etiquettes[indice] and etiquettes[indice] in top5:
            compte += 1
        courbe.append((taille, compte / taille))
    return courbe


def ecrire_courbe_f1t5(chemin: str, courbes: Iterable[Tuple[GenreScore, List[PointCourbe]]]) -> None:
    """
    Écrit les courbes au format CSV ``prefix_size,ratio,score_kind``.

    :param chemin: fichier de sortie.
    :param courbes: couples ``(genre, courbe)``.
    """

    with open(chemin, "w", newline='') as fichier:
        ecrivain = csv.writer(fichier)
        ecrivain.writerow(["prefix_size", "ratio", "score_kind"])
        for genre, courbe in courbes:
            for taille, ratio in courbe:
                ecrivain.writerow([taille, repr(ratio), genre.value])
