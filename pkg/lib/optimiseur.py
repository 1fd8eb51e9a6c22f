# -*-coding:Utf-8 -*

"""
Ce module contient la classe ``EtatOptimiseur`` : descente de gradient stochastique avec moment, pénalité L2 et taux
d'apprentissage à recuit cosinus.
"""

from typing import List, Sequence
import math
import numpy as np
from lib.erreurs import ErreurConfiguration, ErreurDimension
from lib.numerique import Tableau, verifier_fini


class EtatOptimiseur:
    """
    Mémorise les tampons de moment et le compteur de pas.

    À chaque pas ``t`` :

    - ``v ← moment · v + (g + decroissance · θ)``
    - ``θ ← θ − lr(t) · v``
    - ``lr(t) = lr_base · 0.5 · (1 + cos(π · t / pas_total))`` si ``recuit`` est actif, ``lr_base`` sinon.

    :param parametres: paramètres optimisés (modifiés en place).
    :param lr_base: taux d'apprentissage initial.
    :param moment: coefficient de moment dans ``[0, 1)``.
    :param decroissance: coefficient de pénalité L2.
    :param pas_total: nombre de pas prévus.
    :param recuit: applique le recuit cosinus.
    """

    def __init__(self, parametres: Sequence[Tableau], lr_base: float = 0.01, moment: float = 0.9,
                 decroissance: float = 1e-4, pas_total: int = 1, recuit: bool = True) -> None:
        """
        :raises ErreurConfiguration: si un hyper-paramètre est hors de son domaine.
        """

        if lr_base <= 0:
            raise ErreurConfiguration("Le taux d'apprentissage doit être positif")
        if not 0 <= moment < 1:
            raise ErreurConfiguration("Le moment doit être compris dans [0, 1)")
        if decroissance < 0:
            raise ErreurConfiguration("La pénalité L2 doit être positive ou nulle")
        if pas_total < 1:
            raise ErreurConfiguration("Le nombre de pas doit être positif")
        self.tampons: List[Tableau] = [np.zeros_like(parametre) for parametre in parametres]
        self.lr_base = lr_base
        self.moment = moment
        self.decroissance = decroissance
        self.pas_total = pas_total
        self.recuit = recuit
        self.compteur = 0

    def taux(self) -> float:
        """
        :return: taux d'apprentissage du pas courant.
        """

        if not self.recuit:
            return self.lr_base
        return self.lr_base * 0.5 * (1.0 + math.cos(math.pi * self.compteur / self.pas_total))

    def pas(self, parametres: Sequence[Tableau], gradients: Sequence[Tableau]) -> None:
        """
        Applique un pas de descente en place sur ``parametres`` et incrémente le compteur.

        :param parametres: paramètres, dans l'ordre des tampons.
        :param gradients: gradients de même forme.
        :raises ErreurConfiguration: si le nombre de pas prévu est atteint.
        :raises ErreurDimension: si les formes ne correspondent pas.
        :raises ErreurNumerique: si un gradient n'est pas fini.
        """

        if self.compteur >= self.pas_total:
            raise ErreurConfiguration("Le nombre de pas prévu ({0}) est atteint".format(self.pas_total))
        if len(parametres) != len(self.tampons) or len(gradients) != len(self.tampons):
            raise ErreurDimension("Nombre de paramètres ou de gradients incohérent")
        for parametre, gradient, tampon in zip(parametres, gradients, self.tampons):
            if parametre.shape != tampon.shape or gradient.shape != tampon.shape:
                raise ErreurDimension("Gradient de forme {0} pour un paramètre de forme {1}".format(
                    gradient.shape, parametre.shape))
            verifier_fini(gradient, "gradients")
        taux = self.taux()
        for parametre, gradient, tampon in zip(parametres, gradients, self.tampons):
            tampon *= self.moment
            tampon += gradient + self.decroissance * parametre
            parametre -= taux * tampon
        self.compteur += 1
