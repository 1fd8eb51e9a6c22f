# -*-coding:Utf-8 -*

"""
Ce module contient la classe ``FichierDonnees``.
"""

from typing import Optional
from lib.donnees import JeuDonnees, lire_jeu
from lib.erreurs import ErreurDonnees, ErreurFichier


class FichierDonnees:
    """
    Objet de transition entre un ``Dossier`` et un ``JeuDonnees``.

    La classe ``FichierDonnees``:

    - lit le jeu désigné par ``chemin`` (CSV ou binaire)
    - valide son contenu : entête, étiquettes et valeurs finies

    :param chemin: chemin d'accès au fichier de données.
    :param nom: identifie le jeu.
    """

    def __init__(self, chemin: str, nom: Optional[str] = None) -> None:
        """
        Instancie un fichier de données. ``jeu`` contient le jeu relu, ``est_valide`` est à True si la lecture a réussi.

        :param chemin: chemin d'accès au fichier de données.
        :param nom: identifie le jeu.
        """

        self.chemin = chemin
        self.nom = nom
        self.jeu: Optional[JeuDonnees] = None
        self.erreur = str()
        self.est_valide = False

        self.extraire()

    def extraire(self) -> None:
        """
        Lit le jeu. Une erreur de lecture invalide le fichier sans lever d'exception.
        """

        try:
            self.jeu = lire_jeu(self.chemin)
        except (ErreurDonnees, ErreurFichier, UnicodeDecodeError, OSError) as erreur:
            self.erreur = str(erreur)
            self.est_valide = False
        else:
            self.est_valide = True

    def __bool__(self) -> bool:
        """
        Lors d'un test '*if FichierDonnees*', le test porte sur la validité du jeu lu.

        :return: si le fichier est valide.
        """

        return self.est_valide
