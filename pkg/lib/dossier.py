# -*-coding:Utf-8 -*

"""
Ce module contient les classes ``Entree`` et ``Dossier``.

``Dossier`` recense les jeux de données d'un dossier, typiquement les jeux de test corrompus écrits par ``gen-data``,
et ne garde que ceux qui sont lisibles.
"""

from dataclasses import dataclass
from typing import Any, Callable, Iterator, List, Optional, Tuple
import logging
import os

journal = logging.getLogger(__name__)


@dataclass(frozen=True)
class Entree:
    """
    Un fichier recensé : chemin complet, nom sans extension, extension, taille en octets et contenu lu.
    """

    chemin: str
    nom: str
    extension: str
    taille: int
    contenu: Any = None


def parcourir(chemin: str, extension: str = str()) -> Iterator[str]:
    """
    Produit, par chemin croissant, les fichiers d'un dossier et de ses sous-dossiers qui portent ``extension``.
    Un chemin de fichier est produit tel quel, quelle que soit son extension.

    :param chemin: chemin d'un fichier ou d'un dossier.
    :param extension: extension retenue (toutes si vide).
    :raises FileNotFoundError: si le chemin n'existe pas ou si aucun fichier du dossier ne porte l'extension.
    :raises OSError: si le chemin n'est ni un dossier ni un fichier.
    """

    if not os.path.exists(chemin):
        raise FileNotFoundError("Le chemin <{0}> n'existe pas".format(chemin))
    if os.path.isfile(chemin):
        yield chemin
        return
    if not os.path.isdir(chemin):
        raise OSError("Le chemin <{0}> n'est pas accessible".format(chemin))
    retenus = sorted(os.path.join(racine, fichier)
                     for racine, _, fichiers in os.walk(chemin)
                     for fichier in fichiers
                     if not extension or os.path.splitext(fichier)[1] == extension)
    if not retenus:
        raise FileNotFoundError("Aucun fichier avec l'extension <{0}> dans <{1}>".format(extension, chemin))
    yield from retenus


class Dossier:
    """
    Liste de jeux de données filtrée en trois temps : extension, fichiers non vides puis, si une ``classe`` est fournie,
    contenus valides. La classe est appelée sous la forme ``classe(chemin=..., nom=...)`` et un contenu est valide
    quand l'objet obtenu est vrai.

    Chaque étape qui vide la liste lève une exception, si bien qu'une instance n'est jamais vide.

    :param chemin: chemin d'un fichier ou d'un dossier.
    :param extension: extension des fichiers retenus dans un dossier.
    :param classe: lecteur appelé sur chaque fichier non vide.
    """

    def __init__(self, chemin: str = '.',
                 extension: str = '.csv',
                 classe: Optional[type] = None) -> None:
        self.entrees: List[Entree] = []
        if not chemin:
            return
        for fichier in parcourir(chemin, extension):
            nom, suffixe = os.path.splitext(os.path.basename(fichier))
            self.entrees.append(Entree(fichier, nom, suffixe, os.path.getsize(fichier)))
        self.filtrer_fichiers_non_vide()
        if classe:
            self.entrees = [Entree(entree.chemin, entree.nom, entree.extension, entree.taille,
                                   classe(chemin=entree.chemin, nom=entree.nom)) for entree in self.entrees]
            self.filtrer_contenus()

    def _retenir(self, garder: Callable[[Entree], bool], erreur: Exception) -> None:
        """
        Ne garde que les entrées acceptées par ``garder``.

        :raises: ``erreur`` si plus aucune entrée ne reste.
        """

        ecartees = [entree.nom for entree in self.entrees if not garder(entree)]
        if ecartees:
            journal.info("Fichiers écartés : %s", ", ".join(ecartees))
        self.entrees = [entree for entree in self.entrees if garder(entree)]
        if not self.entrees:
            raise erreur

    def filtrer_fichiers_non_vide(self) -> None:
        """
        :raises EOFError: si tous les fichiers sont vides.
        """

        self._retenir(lambda entree: entree.taille > 0, EOFError("Aucun fichier non-vide n'a été trouvé"))

    def filtrer_contenus(self) -> None:
        """
        :raises FileNotFoundError: si aucun contenu n'est valide.
        """

        self._retenir(lambda entree: bool(entree.contenu), FileNotFoundError("Aucun fichier n'a de contenu valide"))

    def elements(self) -> List[Tuple[str, Any]]:
        """
        :return: couples ``(nom, contenu)`` par chemin croissant.
        """

        return [(entree.nom, entree.contenu) for entree in self.entrees]

    def __len__(self) -> int:
        """
        :return: nombre de fichiers retenus.
        """

        return len(self.entrees)
