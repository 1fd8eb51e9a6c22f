# -*-coding:Utf-8 -*

"""
Ce module définit les exceptions de la boucle fermée.

- la classe d'exception abstraite ``ExceptionBoucle``
- les classes ``ErreurDimension``, ``ErreurNumerique``, ``ErreurConfiguration``, ``ErreurEtiquette``,
  ``ErreurInstantane``, ``ErreurDonnees``, ``ErreurFichier``, ``ErreurGroupe``
"""

from typing import Any, Dict, Optional
from abc import ABCMeta


class ExceptionBoucle(Exception, metaclass=ABCMeta):
    """
    Classe d'exceptions liées au modèle, aux données et à la boucle d'inférence.
    """

    pass


class ErreurDimension(ExceptionBoucle, ValueError):
    """
    Exception levée si la forme d'une entrée ne correspond pas à celle attendue par le modèle.
    """

    pass


class ErreurNumerique(ExceptionBoucle, ArithmeticError):
    """
    Exception levée si une valeur n'est pas finie (``nan`` ou ``inf``).
    """

    pass


class ErreurConfiguration(ExceptionBoucle, ValueError):
    """
    Exception levée si un paramètre de configuration est hors de son domaine.
    """

    pass


class ErreurEtiquette(ExceptionBoucle, ValueError):
    """
    Exception levée si une étiquette n'est pas un indice de classe valide.
    """

    pass


class ErreurInstantane(ExceptionBoucle):
    """
    Exception levée si un instantané est restauré sur un modèle de forme différente.
    """

    pass


class ErreurDonnees(ExceptionBoucle, ValueError):
    """
    Exception levée si un jeu de données ou les paramètres du générateur sont invalides.
    """

    pass


class ErreurFichier(ExceptionBoucle):
    """
    Exception levée si un fichier binaire n'a pas la signature attendue ou s'il est tronqué.
    """

    pass


class ErreurGroupe(ExceptionBoucle):
    """
    Exception levée si l'entraînement auxiliaire d'un groupe échoue.
    Transporte le diagnostic du rapport partiel.

    :param message: description de l'erreur.
    :param diagnostic: état partiel de la boucle au moment de l'échec.
    """

    def __init__(self, message: str, diagnostic: Optional[Dict[str, Any]] = None) -> None:
        """
        :param message: description de l'erreur.
        :param diagnostic: état partiel de la boucle au moment de l'échec.
        """

        super().__init__(message)
        self.diagnostic: Dict[str, Any] = diagnostic if diagnostic is not None else {}
