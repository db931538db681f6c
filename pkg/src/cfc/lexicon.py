"""Embedded noun/verb lexicon backing the reference POS tagger.

Base forms only, lowercase; the tagger handles plural "-s" and common verb
inflections itself. Coverage aims at everyday visual-scene vocabulary, not
completeness.
"""

from __future__ import annotations

_NOUN_WORDS = """
man woman child boy girl person people baby adult teenager couple family crowd
friend neighbor stranger worker farmer chef cook waiter doctor nurse teacher
student artist painter musician singer dancer actor athlete player runner
swimmer cyclist driver pilot sailor soldier officer police firefighter guard
clerk cashier barber tailor carpenter plumber electrician mechanic engineer
scientist researcher writer author reporter photographer director producer
manager boss customer visitor tourist guide hiker climber camper fisherman
hunter rider skater surfer diver juggler clown magician audience spectator
referee coach captain crew passenger pedestrian vendor shopper bride groom
king queen prince princess knight wizard giant robot astronaut alien monster
dog cat horse cow pig sheep goat donkey rabbit mouse rat squirrel chipmunk
hamster fox wolf bear deer moose elk bison buffalo lion tiger leopard cheetah
panther jaguar elephant giraffe zebra hippo rhino camel llama alpaca monkey
ape gorilla chimpanzee baboon lemur sloth panda koala kangaroo wallaby wombat
platypus otter beaver badger raccoon skunk hedgehog porcupine mole bat seal
walrus dolphin whale shark fish salmon trout tuna cod bass carp goldfish eel
octopus squid jellyfish starfish crab lobster shrimp clam oyster mussel snail
slug worm insect bug ant bee wasp hornet beetle butterfly moth caterpillar
dragonfly grasshopper cricket mosquito fly spider scorpion frog toad newt
salamander lizard gecko iguana chameleon snake python cobra viper turtle
tortoise crocodile alligator dinosaur bird chicken rooster hen duck goose
swan turkey peacock pigeon dove crow raven magpie sparrow finch robin wren
owl hawk eagle falcon vulture stork crane heron flamingo pelican seagull
penguin ostrich emu parrot parakeet canary hummingbird woodpecker kingfisher
tree bush shrub hedge grass lawn meadow flower rose tulip daisy lily orchid
sunflower daffodil violet poppy lavender fern moss vine ivy cactus bamboo
palm oak pine maple birch willow cedar cypress elm ash beech chestnut walnut
leaf branch twig trunk bark root stem bud blossom petal seed sprout sapling
plant garden orchard vineyard forest wood grove jungle thicket
house home apartment flat cottage cabin hut shack mansion villa palace castle
tower skyscraper building structure barn stable shed garage warehouse factory
mill plant office shop store market mall supermarket bakery butchery cafe
restaurant diner bar pub tavern hotel motel inn hostel hospital clinic
pharmacy school college university library museum gallery theater cinema
stadium arena gym pool court church temple mosque cathedral chapel shrine
monastery lighthouse windmill bridge tunnel dam wall fence gate door window
roof ceiling floor wallpaper chimney balcony porch patio deck stair staircase
elevator escalator hallway corridor room kitchen bathroom bedroom basement
attic closet pantry lobby courtyard fountain statue monument pillar column
arch dome spire
bread toast loaf roll bun bagel croissant cake pie tart cookie biscuit brownie
muffin pancake waffle doughnut pastry pudding custard cream butter cheese
yogurt milk egg omelet bacon ham sausage steak beef pork lamb veal chicken
turkey meat fish seafood sushi rice pasta noodle spaghetti macaroni pizza
burger sandwich taco burrito wrap salad soup stew curry sauce gravy ketchup
mustard mayonnaise vinegar oil salt pepper sugar honey jam jelly syrup
chocolate candy sweet snack chip fry popcorn pretzel cereal oatmeal porridge
fruit apple banana orange lemon lime grape berry strawberry blueberry
raspberry blackberry cherry peach pear plum apricot mango papaya pineapple
melon watermelon kiwi fig date coconut avocado tomato potato carrot onion
garlic ginger pepper cucumber zucchini eggplant pumpkin squash cabbage
lettuce spinach kale broccoli cauliflower celery asparagus pea bean corn
mushroom radish turnip beet herb basil mint parsley cilantro rosemary thyme
coffee tea juice soda lemonade smoothie cocktail wine beer whiskey vodka
cider water
car truck van bus taxi cab jeep suv sedan coupe convertible limousine trailer
tractor bulldozer excavator crane forklift ambulance firetruck motorcycle
scooter moped bicycle bike tricycle skateboard wagon cart carriage sled
sleigh train tram subway metro locomotive wagon boat ship ferry yacht canoe
kayak raft sailboat speedboat submarine barge tanker airplane plane jet
helicopter glider balloon blimp rocket shuttle spacecraft drone vehicle
engine motor wheel tire brake pedal handlebar steering windshield bumper
headlight taillight mirror trunk hood dashboard seatbelt
mountain hill valley canyon cliff ridge peak summit slope plateau plain
prairie desert dune oasis tundra glacier iceberg volcano crater cave cavern
rock stone boulder pebble gravel sand soil dirt mud clay dust river stream
creek brook waterfall rapids lake pond lagoon marsh swamp wetland bog spring
geyser ocean sea bay gulf strait channel coast shore beach tide wave current
reef island peninsula cape horizon sky cloud mist fog rain drizzle shower
storm thunder lightning hail snow sleet frost ice dew rainbow wind breeze
gale hurricane tornado cyclone sunshine sunlight moonlight starlight dawn
dusk sunrise sunset daylight darkness shadow
sun moon star planet comet asteroid meteor galaxy universe cosmos orbit
nebula constellation eclipse satellite telescope observatory
city town village hamlet suburb district neighborhood block street road
avenue boulevard lane alley path trail sidewalk pavement crosswalk
intersection corner square plaza park playground garden bench lamppost
billboard sign signal traffic curb gutter drain sewer hydrant mailbox
station airport harbor port dock pier wharf marina terminal platform track
rail crossing roundabout highway freeway motorway overpass underpass ramp
parking lot meter skyline rooftop
computer laptop desktop tablet phone smartphone telephone keyboard mouse
monitor screen display printer scanner camera lens tripod microphone speaker
headphone earphone radio television remote console controller joystick
battery charger cable wire cord plug socket outlet switch button circuit
chip processor memory disk drive server network router modem antenna
satellite robot machine device gadget appliance refrigerator freezer oven
stove microwave toaster blender mixer kettle dishwasher washer dryer vacuum
fan heater conditioner thermostat lamp bulb flashlight lantern candle clock
watch timer alarm calculator projector drone sensor
table desk chair stool bench sofa couch armchair bed mattress pillow blanket
sheet quilt duvet cushion rug carpet mat curtain blind shelf bookcase cabinet
cupboard drawer dresser wardrobe nightstand counter countertop sink faucet
tub shower toilet mirror frame picture painting poster photograph vase pot
pan skillet kettle bowl plate dish saucer cup mug glass bottle jar jug
pitcher tray basket bucket bin barrel crate box container lid spoon fork
knife chopstick ladle spatula whisk grater peeler opener corkscrew napkin
towel sponge soap shampoo brush comb razor toothbrush toothpaste detergent
broom mop dustpan hammer screwdriver wrench plier drill saw axe chisel file
sandpaper nail screw bolt nut washer tape glue rope string thread needle pin
scissors ruler tape measure level ladder toolbox
shirt blouse sweater jumper hoodie jacket coat parka raincoat vest suit
tuxedo dress gown skirt pant trouser jean short legging sock stocking shoe
boot sneaker sandal slipper heel glove mitten scarf shawl hat cap beanie
helmet hood bonnet tie bowtie belt suspenders button zipper pocket collar
sleeve cuff hem uniform costume pajama robe underwear bra swimsuit bikini
goggle sunglass necklace bracelet ring earring brooch pendant watch wallet
purse handbag backpack suitcase luggage umbrella cane
ball football soccer basketball baseball softball volleyball tennis golf
hockey cricket rugby badminton racket racquet bat club stick puck net goal
hoop target arrow bow dart frisbee kite marble dice card chess checker
domino puzzle toy doll puppet teddy block lego train kit drum guitar piano
violin cello viola bass flute clarinet oboe saxophone trumpet trombone tuba
horn harp banjo ukulele accordion harmonica keyboard organ cymbal tambourine
xylophone microphone stage curtain spotlight orchestra band choir concert
song music melody rhythm beat tune chord note lyric album track
book novel story tale poem essay article journal magazine newspaper comic
dictionary encyclopedia atlas map chart diagram graph table list menu recipe
letter postcard envelope stamp package parcel document file folder page
paper notebook notepad diary planner calendar ticket receipt invoice bill
coupon flyer brochure pamphlet manual guide textbook workbook chalk
chalkboard whiteboard marker pen pencil crayon eraser sharpener ink stapler
clip binder easel canvas palette paint brush sketch drawing sculpture statue
pottery craft
game match tournament race marathon sprint relay competition contest event
festival carnival parade celebration party wedding birthday anniversary
holiday vacation trip journey voyage tour expedition adventure picnic
barbecue campfire bonfire fireworks show performance play opera ballet dance
circus exhibition fair auction ceremony graduation funeral meeting
conference lecture seminar workshop class lesson course exam test quiz
homework assignment project experiment demonstration rehearsal practice
morning afternoon evening night midnight noon today yesterday tomorrow week
weekend month year decade century season spring summer autumn winter moment
minute second hour instant while period era age history future past present
time
head face forehead eyebrow eyelash eyelid eye pupil iris nose nostril cheek
jaw chin mouth lip tooth tongue throat neck shoulder arm elbow wrist hand
palm finger thumb knuckle nail chest waist hip leg thigh knee shin calf
ankle foot heel toe back spine rib skin hair beard mustache muscle bone
joint heart lung stomach liver kidney brain nerve vein blood sweat tear
voice breath
color red orange yellow green blue purple pink brown black white gray
silver gold shade hue tint tone light dark brightness contrast pattern
stripe dot spot patch texture surface edge corner side top bottom middle
center front rear end tip point line curve circle oval square rectangle
triangle diamond hexagon cube sphere cylinder cone pyramid spiral angle
width height depth length size shape form figure outline silhouette
fire flame ember smoke ash coal charcoal fuel gasoline petrol diesel oil
gas steam vapor bubble foam froth splash drop droplet puddle pool leak
air oxygen metal iron steel copper bronze brass aluminum tin lead zinc
nickel titanium gold silver platinum mineral crystal gem jewel diamond ruby
emerald sapphire pearl amber quartz marble granite limestone sandstone slate
brick concrete cement mortar plaster asphalt tar glass ceramic porcelain clay
plastic rubber foam sponge leather suede fur wool cotton linen silk satin
velvet denim canvas nylon polyester fabric cloth textile fiber paper
cardboard wood timber lumber plank board beam log stick straw hay reed
wicker bone ivory shell coral wax
money cash coin dollar euro pound cent price cost value worth profit loss
income salary wage fee fare rent tax debt loan credit bank account budget
market trade deal sale purchase bargain discount business company firm
corporation industry factory product goods service brand label logo
advertisement commercial customer client deal contract agreement
news report headline story broadcast channel program episode series season
movie film video clip footage scene shot frame screen trailer documentary
animation cartoon subtitle caption credits actor cast crew script plot
character hero villain narrator dialogue sound effect soundtrack studio set
prop costume makeup camera angle closeup zoom pan tilt focus exposure
idea thought opinion belief fact truth lie secret question answer problem
solution reason cause effect result outcome purpose goal aim plan strategy
method way manner means step stage phase level degree rate speed pace
distance direction route course destination location position place spot
site area region zone territory country nation state province county border
boundary limit range scope extent amount number quantity sum total part
portion piece fragment section segment slice half quarter third pair dozen
group set collection series sequence order arrangement row column stack pile
heap bunch bundle batch load cargo freight shipment supply stock reserve
storage
""".split()

_VERB_WORDS = """
be have do say go get make know think take see come want look use find give
tell work call try ask need feel become leave put mean keep let begin seem
help talk turn start show hear play run move like live believe hold bring
happen write provide sit stand lose pay meet include continue set learn
change lead understand watch follow stop create speak read allow add spend
grow open walk win offer remember love consider appear buy wait serve die
send expect build stay fall cut reach kill remain suggest raise pass sell
require report decide pull return explain hope develop carry break receive
agree support hit produce eat cover catch draw choose cause point listen
realize place close involve wear prepare enjoy describe drive relax wash
wonder teach press push pour pick paint pack order notice mix measure
match marry manage lift lie lay laugh land jump join introduce hang hate
handle guess greet gather freeze forget fold fly fix fit finish fill fight
feed face express escape enter encourage employ earn dry drop drink dress
dream dig deliver delay dance cry crash count cost correct copy cook
control connect confirm compare climb clean claim check charge celebrate
burn brush borrow boil bend beat bake avoid attend attach arrive arrange
approve apply answer announce admit adjust achieve accept wave tie throw
swim surf ski skate slide slip smile smell snow sneeze shout shoot shine
shake settle sew search scream score save sail rub rise ring ride repair
repeat rent remove remind release refuse reflect record recognize recall
receive rescue rest retire reply ignore identify hurry hunt hug hide
improve increase imagine kick kiss knock knit lean leap lend lock look
march mention melt mind miss mount nod obey observe occur operate oppose
organize owe own park participate perform permit persuade phone plant
plead point polish possess postpone pounce pound practice praise pray
predict prefer pretend prevent print proceed promise pronounce propose
protect prove publish punch punish purchase pursue quit race reduce regret
relate remark replace request resemble reserve resist resolve respond
retain reveal review reward roar roast roll rotate row ruin rush satisfy
scan scatter scold scratch seal seize select separate shave shift shiver
shrug sigh sign signal sing sink sip slam slap sleep smash snap snatch
sneak sniff soak solve sort sound sow spark sparkle spell spill spin split
spray spread spring sprinkle squeeze stack stamp stare steal steer step
stir stitch stretch strike stroll struggle study stumble submit succeed
suck suffer supply suppose surprise surround survive swallow sweep swing
switch tap taste tear tease thank tick tickle tidy tip toss touch tour
trade train translate travel treat tremble trim trip trust tumble twist
type underline unfold unload unlock unpack update upset vanish visit wander
warm warn waste weave weep weigh welcome whip whisper whistle wipe wish
work wrap wreck yawn yell zoom glance glide glow grab grill grind grip
groan growl gulp gush hammer harvest haul heal heat hop hover howl inspect
install instruct invent invite iron jog juggle kneel label lick light
limp load locate march mow munch nail navigate nibble notice nurse obtain
pace paddle pat patrol pause peck pedal peel peer perch pet photograph
pilot pinch pitch pluck plunge poke pop pose position pot pounce precede
prick prompt prop provide prowl pry pump purr quack rattle reap rebuild
recite reconsider recount recover redo reel refill rehearse reload remodel
renew reopen repave rephrase rescue reshape restart restore retrace
retrieve reunite rev revise rewind rinse rip rock rumble sag salute sample
sand saw scamper scoop scoot scrape scribble scrub scurry seat shade
sharpen shatter shear shed shelter shepherd shred shrink shuffle shut
sizzle skid skim skip slice slither slump smear smooth snore snuggle soar
sob soften sparkle spit splash spoil spout sprint sprout spy squat squeak
squint stab stagger stain stall stand startle starve steam stoop strap
stray stride strip strum strut stuff style submerge surge swirl swoop
tackle tangle taxi thaw thread thrive thump thunder tie tilt tiptoe toast
topple tow trace track trail trample transfer transform transport tread
trick trickle trot tug tune twirl unbutton uncover undress unearth untie
unveil unwind vacuum vault veer venture vibrate view wade wag wail
water weld wiggle wilt wind wink wobble wring zip
""".split()

NOUNS: frozenset[str] = frozenset(_NOUN_WORDS)
VERBS: frozenset[str] = frozenset(_VERB_WORDS) - NOUNS
