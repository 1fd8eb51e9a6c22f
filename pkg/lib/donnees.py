# -*-coding:Utf-8 -*

"""
Ce module contient le banc d'essai synthétique à classes fines.

- les classes ``JeuDonnees``, ``SpecGenerateur``
- les fonctions ``generer_finegrained()``, ``corrompre()``
- les fonctions ``ecrire_csv()``, ``lire_csv()``, ``ecrire_binaire()``, ``lire_binaire()``, ``lire_jeu()``
"""

from typing import List, Optional, Sequence, Tuple, Final
import csv
import struct
import numpy as np
from lib.erreurs import ErreurConfiguration, ErreurDonnees, ErreurFichier
from lib.numerique import Tableau, Graine, deriver_graine

# Signature du fichier binaire de données
signature_donnees: Final[bytes] = b"CLIDATA1"
version_donnees: Final[int] = 1

# Écart type du bruit de corruption par niveau de sévérité, calibré pour que la sévérité 3 divise par deux la précision
# du modèle de base sur le banc d'essai par défaut (valeur recopiée dans test/test donnees/constantes.json).
ecart_type_severite: Final[float] = 0.6

corruptions_connues: Final = ("gaussian_noise",)


class JeuDonnees:
    """
    Jeu de données étiqueté.

    :param caracteristiques: matrice ``(m, d)`` de réels finis.
    :param etiquettes: ``m`` indices de classe dans ``[0, C)``.
    :param nombre_classes: nombre de classes ``C``.
    :param superclasses: superclasse de chaque classe (métadonnée facultative).
    """

    def __init__(self, caracteristiques: Tableau, etiquettes: Tableau, nombre_classes: int,
                 superclasses: Optional[Sequence[int]] = None) -> None:
        """
        :raises ErreurDonnees: si les formes sont incohérentes, une étiquette hors domaine ou une valeur non finie.
        """

        self.caracteristiques = np.asarray(caracteristiques, dtype=np.float64)
        self.etiquettes = np.asarray(etiquettes, dtype=np.int64)
        self.nombre_classes = int(nombre_classes)
        self.superclasses: Optional[List[int]] = None if superclasses is None else [int(s) for s in superclasses]
        if self.caracteristiques.ndim != 2 or self.etiquettes.shape != (self.caracteristiques.shape[0],):
            raise ErreurDonnees("Caractéristiques {0} et étiquettes {1} incohérentes".format(
                self.caracteristiques.shape, self.etiquettes.shape))
        if self.nombre_classes < 1:
            raise ErreurDonnees("Le nombre de classes doit être positif")
        if self.etiquettes.size and (self.etiquettes.min() < 0 or self.etiquettes.max() >= self.nombre_classes):
            raise ErreurDonnees("Étiquette hors de [0, {0})".format(self.nombre_classes))
        if not np.all(np.isfinite(self.caracteristiques)):
            raise ErreurDonnees("Les caractéristiques contiennent des valeurs non finies")
        if self.superclasses is not None and len(self.superclasses) != self.nombre_classes:
            raise ErreurDonnees("Une superclasse est attendue par classe")

    def __len__(self) -> int:
        return int(self.etiquettes.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.caracteristiques.shape[1])

    def sous_ensemble(self, indices: Sequence[int]) -> 'JeuDonnees':
        """
        :param indices: indices des échantillons conservés.
        :return: nouveau jeu restreint aux indices, dans leur ordre.
        """

        selection = np.asarray(indices, dtype=np.int64)
        return JeuDonnees(self.caracteristiques[selection], self.etiquettes[selection], self.nombre_classes,
                          self.superclasses)


class SpecGenerateur:
    """
    Paramètres du banc d'essai : ``superclasses`` centres tirés à distance ``~ecart_inter`` les uns des autres, chacun
    entouré de ``sous_classes`` centres à distance ``~ecart_intra``, puis des échantillons ``centre + N(0, bruit² I)``.

    :param superclasses: nombre de superclasses ``S``.
    :param sous_classes: nombre de classes par superclasse ``m``.
    :param dimension: dimension ``d``.
    :param ecart_intra: distance typique entre classes d'une même superclasse ``δ``.
    :param ecart_inter: distance typique entre superclasses ``Δ``.
    :param par_classe_entrainement: échantillons d'entraînement par classe.
    :param par_classe_test: échantillons de test par classe.
    :param bruit: écart type ``σ`` du bruit des échantillons.
    :param graine: graine du tirage.
    """

    def __init__(self, superclasses: int = 5, sous_classes: int = 8, dimension: int = 32, ecart_intra: float = 3.0,
                 ecart_inter: float = 10.0, par_classe_entrainement: int = 100, par_classe_test: int = 25,
                 bruit: float = 1.0, graine: Graine = 0) -> None:
        self.superclasses = superclasses
        self.sous_classes = sous_classes
        self.dimension = dimension
        self.ecart_intra = ecart_intra
        self.ecart_inter = ecart_inter
        self.par_classe_entrainement = par_classe_entrainement
        self.par_classe_test = par_classe_test
        self.bruit = bruit
        self.graine = graine

    @property
    def nombre_classes(self) -> int:
        return self.superclasses * self.sous_classes

    def valider(self) -> None:
        """
        :raises ErreurDonnees: si ``C < 2``, si ``Δ > δ > 0`` n'est pas respecté ou si une taille est invalide.
        """

        if self.superclasses < 1 or self.sous_classes < 1 or self.nombre_classes < 2:
            raise ErreurDonnees("Le banc d'essai demande au moins deux classes")
        if not self.ecart_inter > self.ecart_intra > 0:
            raise ErreurDonnees("Les écarts doivent vérifier ecart_inter > ecart_intra > 0")
        if self.dimension < 1 or self.par_classe_entrainement < 1 or self.par_classe_test < 1 or self.bruit < 0:
            raise ErreurDonnees("Dimension, effectifs et bruit doivent être positifs")


def _tirer(generateur: np.random.Generator, centres: Tableau, effectif: int, bruit: float) -> Tuple[Tableau, Tableau]:
    """
    :return: ``effectif`` échantillons par centre et leurs étiquettes, classe par classe.
    """

    etiquettes = np.repeat(np.arange(centres.shape[0]), effectif)
    caracteristiques = centres[etiquettes] + generateur.normal(0.0, bruit, size=(etiquettes.shape[0], centres.shape[1]))
    return caracteristiques, etiquettes


def generer_finegrained(spec: SpecGenerateur) -> Tuple[JeuDonnees, JeuDonnees]:
    """
    Génère les jeux d'entraînement et de test du banc d'essai à classes fines. Les deux jeux sont tirés de flux aléatoires
    distincts dérivés de la graine.

    :param spec: paramètres du banc d'essai.
    :return: ``(entrainement, test)``.
    :raises ErreurDonnees: si les paramètres sont invalides.
    """

    spec.valider()
    generateur = np.random.default_rng(deriver_graine(spec.graine, "centres"))
    echelle = 1.0 / np.sqrt(2.0 * spec.dimension)
    centres_super = generateur.normal(0.0, spec.ecart_inter * echelle, size=(spec.superclasses, spec.dimension))
    decalages = generateur.normal(0.0, spec.ecart_intra * echelle,
                                  size=(spec.superclasses, spec.sous_classes, spec.dimension))
    centres = (centres_super[:, np.newaxis, :] + decalages).reshape(spec.nombre_classes, spec.dimension)
    superclasses = [classe // spec.sous_classes for classe in range(spec.nombre_classes)]

    jeux = []
    for usage, effectif in (("entrainement", spec.par_classe_entrainement), ("test", spec.par_classe_test)):
        flux = np.random.default_rng(deriver_graine(spec.graine, usage))
        caracteristiques, etiquettes = _tirer(flux, centres, effectif, spec.bruit)
        jeux.append(JeuDonnees(caracteristiques, etiquettes, spec.nombre_classes, superclasses))
    return jeux[0], jeux[1]


def corrompre(jeu: JeuDonnees, genre: str = "gaussian_noise", severite: int = 3, graine: Graine = 0,
              ecart_type_unitaire: float = ecart_type_severite) -> JeuDonnees:
    """
    Ajoute un bruit gaussien ``N(0, (severite · ecart_type_unitaire)² I)`` aux caractéristiques. Les étiquettes sont
    inchangées.

    :param jeu: jeu source.
    :param genre: genre de corruption, seul ``gaussian_noise`` est connu.
    :param severite: niveau de 1 à 5.
    :param graine: graine du bruit.
    :param ecart_type_unitaire: écart type par niveau de sévérité.
    :return: jeu corrompu.
    :raises ErreurConfiguration: si le genre est inconnu ou la sévérité hors de 1..5.
    """

    if genre not in corruptions_connues:
        raise ErreurConfiguration("Corruption inconnue : <{0}>".format(genre))
    if severite not in range(1, 6):
        raise ErreurConfiguration("La sévérité doit être comprise entre 1 et 5")
    generateur = np.random.default_rng(deriver_graine(graine, genre, severite))
    bruit = generateur.normal(0.0, severite * ecart_type_unitaire, size=jeu.caracteristiques.shape)
    return JeuDonnees(jeu.caracteristiques + bruit, jeu.etiquettes.copy(), jeu.nombre_classes, jeu.superclasses)


def ecrire_csv(jeu: JeuDonnees, chemin: str) -> None:
    """
    Écrit le jeu au format CSV ``label,f0,...,f{d-1}``. Les réels sont écrits avec ``repr()`` pour une relecture exacte.
    Le nombre de classes est écrit dans une ligne de commentaire ``# classes=C``.

    :param jeu: jeu à écrire.
    :param chemin: chemin du fichier.
    """

    with open(chemin, "w", newline='') as fichier:
        fichier.write("# classes={0}\n".format(jeu.nombre_classes))
        ecrivain = csv.writer(fichier)
        ecrivain.writerow(["label"] + ["f{0}".format(indice) for indice in range(jeu.dimension)])
        for etiquette, ligne in zip(jeu.etiquettes, jeu.caracteristiques):
            ecrivain.writerow([int(etiquette)] + [repr(float(valeur)) for valeur in ligne])


def lire_csv(chemin: str, nombre_classes: Optional[int] = None) -> JeuDonnees:
    """
    Lit un jeu écrit par ``ecrire_csv()``.

    :param chemin: chemin du fichier.
    :param nombre_classes: nombre de classes si le fichier ne l'indique pas. Sinon ``max(label) + 1``.
    :return: jeu relu.
    :raises ErreurDonnees: si l'entête ou une ligne est invalide.
    """

    with open(chemin, "r", newline='') as fichier:
        lignes = fichier.read().splitlines()
    if lignes and lignes[0].startswith("# classes="):
        try:
            nombre_classes = int(lignes.pop(0).split("=", 1)[1])
        except ValueError:
            raise ErreurDonnees("Nombre de classes illisible dans <{0}>".format(chemin))
    lecteur = csv.reader(lignes)
    entete = next(lecteur, None)
    if not entete or entete[0] != "label" or entete[1:] != ["f{0}".format(i) for i in range(len(entete) - 1)]:
        raise ErreurDonnees("Entête invalide dans <{0}>".format(chemin))
    etiquettes: List[int] = []
    caracteristiques: List[List[float]] = []
    for numero, ligne in enumerate(lecteur, start=2):
        if len(ligne) != len(entete):
            raise ErreurDonnees("Ligne {0} de <{1}> : {2} colonnes attendues".format(numero, chemin, len(entete)))
        try:
            etiquettes.append(int(ligne[0]))
            caracteristiques.append([float(valeur) for valeur in ligne[1:]])
        except ValueError:
            raise ErreurDonnees("Ligne {0} de <{1}> : valeur non numérique".format(numero, chemin))
    if nombre_classes is None:
        nombre_classes = max(etiquettes) + 1 if etiquettes else 1
    matrice = np.array(caracteristiques, dtype=np.float64).reshape(len(etiquettes), len(entete) - 1)
    return JeuDonnees(matrice, np.array(etiquettes, dtype=np.int64), nombre_classes)


def ecrire_binaire(jeu: JeuDonnees, chemin: str) -> None:
    """
    Écrit le jumeau binaire du CSV : signature ``CLIDATA1``, entête ``version, m, d, C, avec_superclasses`` (entiers 32 bits
    petit-boutistes), superclasses éventuelles, étiquettes (int32) puis caractéristiques (float64, ligne par ligne).

    :param jeu: jeu à écrire.
    :param chemin: chemin du fichier.
    """

    with open(chemin, "wb") as fichier:
        fichier.write(signature_donnees)
        fichier.write(struct.pack('<iiiii', version_donnees, len(jeu), jeu.dimension, jeu.nombre_classes,
                                  int(jeu.superclasses is not None)))
        if jeu.superclasses is not None:
            fichier.write(np.asarray(jeu.superclasses, dtype='<i4').tobytes())
        fichier.write(np.asarray(jeu.etiquettes, dtype='<i4').tobytes())
        fichier.write(np.ascontiguousarray(jeu.caracteristiques, dtype='<f8').tobytes())


def lire_binaire(chemin: str) -> JeuDonnees:
    """
    Lit un jeu écrit par ``ecrire_binaire()``.

    :param chemin: chemin du fichier.
    :return: jeu relu.
    :raises ErreurFichier: si la signature, la version ou la taille ne correspondent pas.
    """

    with open(chemin, "rb") as fichier:
        contenu = fichier.read()
    if contenu[:len(signature_donnees)] != signature_donnees:
        raise ErreurFichier("Le fichier <{0}> n'est pas un jeu de données binaire".format(chemin))
    position = len(signature_donnees)
    try:
        version, nombre, dimension, classes, avec_superclasses = struct.unpack_from('<iiiii', contenu, position)
        position += 20
        if version != version_donnees:
            raise ErreurFichier("Version de jeu de données inconnue : {0}".format(version))
        superclasses = None
        if avec_superclasses:
            superclasses = np.frombuffer(contenu, dtype='<i4', count=classes, offset=position).tolist()
            position += 4 * classes
        etiquettes = np.frombuffer(contenu, dtype='<i4', count=nombre, offset=position).astype(np.int64)
        position += 4 * nombre
        caracteristiques = np.frombuffer(contenu, dtype='<f8', count=nombre * dimension, offset=position)
        position += 8 * nombre * dimension
    except (struct.error, ValueError):
        raise ErreurFichier("Le jeu de données <{0}> est tronqué".format(chemin))
    if position != len(contenu):
        raise ErreurFichier("Le jeu de données <{0}> contient des données en trop".format(chemin))
    return JeuDonnees(caracteristiques.reshape(nombre, dimension).astype(np.float64), etiquettes, classes, superclasses)


def lire_jeu(chemin: str) -> JeuDonnees:
    """
    Lit un jeu CSV (``.csv``) ou binaire (toute autre extension).

    :param chemin: chemin du fichier.
    :return: jeu relu.
    """

    if chemin.lower().endswith(".csv"):
        return lire_csv(chemin)
    return lire_binaire(chemin)
